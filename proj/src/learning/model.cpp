// Copyright 2026 The WheelArm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "learning/model.hpp"

#include <cmath>
#include <random>

#include "common/error.hpp"

namespace wheelarm::learning {

namespace {

constexpr double kNormEps = 1e-5;

template <class T>
struct Cache {
  Mat<T> x, pre1, a1, pre2, a2;
  Mat<T> norm, inv_std;  // state encoder normalization
  Mat<T> pooled;         // token_embed x batch
  Mat<T> gi, gf, gg, go, c, tanh_c, h;
  Mat<T> y;
};

template <class T>
Mat<T> sigmoid(const Mat<T>& z) {
  return (T(1) / (T(1) + (-z.array()).exp())).matrix();
}

template <class T>
void run_forward(const Params<T>& p, const Batch<T>& b, Cache<T>& c) {
  const ModelDims& d = p.dims;
  const Eigen::Index n = static_cast<Eigen::Index>(b.steps) * b.batch;
  const int hd = d.lstm_hidden;

  c.pooled = Mat<T>::Zero(d.token_embed, b.batch);
  for (int j = 0; j < b.batch; ++j) {
    const auto& toks = b.tokens[static_cast<std::size_t>(j)];
    for (int tok : toks) c.pooled.col(j) += p[kEmbedding].col(tok);
    if (!toks.empty()) c.pooled.col(j) /= static_cast<T>(toks.size());
  }

  Mat<T> s = p[kStateW] * b.state;
  s.colwise() += p[kStateB].col(0);
  const Eigen::Matrix<T, 1, Eigen::Dynamic> mu = s.colwise().mean();
  s.rowwise() -= mu;
  const Eigen::Matrix<T, 1, Eigen::Dynamic> var = s.array().square().colwise().mean();
  c.inv_std = (var.array() + T(kNormEps)).rsqrt().matrix();
  c.norm = (s.array().rowwise() * c.inv_std.row(0).array()).matrix();

  c.x.resize(d.fused_input(), n);
  Eigen::Index row = 0;
  c.x.middleRows(row, d.rgb_embed) = (p[kRgbW] * b.rgb).colwise() + p[kRgbB].col(0);
  row += d.rgb_embed;
  c.x.middleRows(row, d.depth_embed) = (p[kDepthW] * b.depth).colwise() + p[kDepthB].col(0);
  row += d.depth_embed;
  c.x.middleRows(row, d.state_embed) =
      ((c.norm.array().colwise() * p[kNormGain].col(0).array()).colwise() + p[kNormBias].col(0).array()).matrix();
  row += d.state_embed;
  c.x.middleRows(row, d.time_embed) = (p[kTimeW] * b.time).colwise() + p[kTimeB].col(0);
  row += d.time_embed;
  for (int s_i = 0; s_i < b.steps; ++s_i) {
    c.x.block(row, static_cast<Eigen::Index>(s_i) * b.batch, d.token_embed, b.batch) = c.pooled;
  }

  c.pre1 = (p[kFuse1W] * c.x).colwise() + p[kFuse1B].col(0);
  c.a1 = c.pre1.cwiseMax(T(0));
  c.pre2 = (p[kFuse2W] * c.a1).colwise() + p[kFuse2B].col(0);
  c.a2 = c.pre2.cwiseMax(T(0));

  const Mat<T> xg = (p[kLstmWx] * c.a2).colwise() + p[kLstmB].col(0);
  c.gi.resize(hd, n);
  c.gf.resize(hd, n);
  c.gg.resize(hd, n);
  c.go.resize(hd, n);
  c.c.resize(hd, n);
  c.tanh_c.resize(hd, n);
  c.h.resize(hd, n);
  Mat<T> h_prev = Mat<T>::Zero(hd, b.batch);
  Mat<T> c_prev = Mat<T>::Zero(hd, b.batch);
  for (int s_i = 0; s_i < b.steps; ++s_i) {
    const Eigen::Index col = static_cast<Eigen::Index>(s_i) * b.batch;
    const Mat<T> z = xg.middleCols(col, b.batch) + p[kLstmWh] * h_prev;
    c.gi.middleCols(col, b.batch) = sigmoid<T>(z.topRows(hd));
    c.gf.middleCols(col, b.batch) = sigmoid<T>(z.middleRows(hd, hd));
    c.gg.middleCols(col, b.batch) = z.middleRows(2 * hd, hd).array().tanh().matrix();
    c.go.middleCols(col, b.batch) = sigmoid<T>(z.bottomRows(hd));
    c.c.middleCols(col, b.batch) =
        (c.gf.middleCols(col, b.batch).array() * c_prev.array() +
         c.gi.middleCols(col, b.batch).array() * c.gg.middleCols(col, b.batch).array())
            .matrix();
    c.tanh_c.middleCols(col, b.batch) = c.c.middleCols(col, b.batch).array().tanh().matrix();
    c.h.middleCols(col, b.batch) =
        (c.go.middleCols(col, b.batch).array() * c.tanh_c.middleCols(col, b.batch).array()).matrix();
    h_prev = c.h.middleCols(col, b.batch);
    c_prev = c.c.middleCols(col, b.batch);
  }
  c.y = (p[kHeadW] * c.h).colwise() + p[kHeadB].col(0);
}

template <class T>
void uniform_fill(Mat<T>& m, double bound, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-bound, bound);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = static_cast<T>(u(rng));
  }
}

}  // namespace

void ModelDims::validate() const {
  for (int v : {rgb_embed, depth_embed, state_embed, time_embed, token_embed, fusion_hidden, fusion_out, lstm_hidden}) {
    if (v <= 0) fail(ErrorCode::kInvalidArgument, "model dimensions must be positive");
  }
}

Json ModelDims::to_json() const {
  return Json{{"rgb_embed", rgb_embed},         {"depth_embed", depth_embed},     {"state_embed", state_embed},
              {"time_embed", time_embed},       {"token_embed", token_embed},     {"fusion_hidden", fusion_hidden},
              {"fusion_out", fusion_out},       {"lstm_hidden", lstm_hidden},     {"rgb_input", kRgbDim},
              {"depth_input", kDepthDim},       {"state_input", kStateDim},       {"token_buckets", kTokenBuckets},
              {"output", kTargetDim}};
}

ModelDims ModelDims::from_json(const Json& j) {
  ModelDims d;
  try {
    d.rgb_embed = j.at("rgb_embed").get<int>();
    d.depth_embed = j.at("depth_embed").get<int>();
    d.state_embed = j.at("state_embed").get<int>();
    d.time_embed = j.at("time_embed").get<int>();
    d.token_embed = j.at("token_embed").get<int>();
    d.fusion_hidden = j.at("fusion_hidden").get<int>();
    d.fusion_out = j.at("fusion_out").get<int>();
    d.lstm_hidden = j.at("lstm_hidden").get<int>();
  } catch (const Json::exception& e) {
    fail(ErrorCode::kSchemaError, std::string("model dims: ") + e.what());
  }
  d.validate();
  return d;
}

const std::array<std::string, kTensorCount>& tensor_names() {
  static const std::array<std::string, kTensorCount> names = {
      "rgb.weight",   "rgb.bias",   "depth.weight", "depth.bias", "state.weight", "state.bias",  "state.norm_gain",
      "state.norm_bias", "time.weight", "time.bias", "token.embedding", "fusion1.weight", "fusion1.bias",
      "fusion2.weight", "fusion2.bias", "lstm.weight_input", "lstm.weight_hidden", "lstm.bias", "head.weight",
      "head.bias"};
  return names;
}

std::array<std::pair<int, int>, kTensorCount> tensor_shapes(const ModelDims& d) {
  const int g = 4 * d.lstm_hidden;
  return {{{d.rgb_embed, kRgbDim},
           {d.rgb_embed, 1},
           {d.depth_embed, kDepthDim},
           {d.depth_embed, 1},
           {d.state_embed, kStateDim},
           {d.state_embed, 1},
           {d.state_embed, 1},
           {d.state_embed, 1},
           {d.time_embed, 1},
           {d.time_embed, 1},
           {d.token_embed, kTokenBuckets},
           {d.fusion_hidden, d.fused_input()},
           {d.fusion_hidden, 1},
           {d.fusion_out, d.fusion_hidden},
           {d.fusion_out, 1},
           {g, d.fusion_out},
           {g, d.lstm_hidden},
           {g, 1},
           {kTargetDim, d.lstm_hidden},
           {kTargetDim, 1}}};
}

template <class T>
Params<T> Params<T>::zeros(const ModelDims& dims) {
  dims.validate();
  Params<T> p;
  p.dims = dims;
  for (const auto& [r, c] : tensor_shapes(dims)) p.t.push_back(Mat<T>::Zero(r, c));
  return p;
}

template <class T>
std::size_t Params<T>::count() const {
  std::size_t n = 0;
  for (const auto& m : t) n += static_cast<std::size_t>(m.size());
  return n;
}

Params<float> init_params(const ModelDims& dims, std::uint64_t seed) {
  Params<float> p = Params<float>::zeros(dims);
  std::mt19937_64 rng(seed);
  auto linear = [&](int w, int b) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(p[w].cols()));
    uniform_fill(p[w], bound, rng);
    uniform_fill(p[b], bound, rng);
  };
  linear(kRgbW, kRgbB);
  linear(kDepthW, kDepthB);
  linear(kStateW, kStateB);
  p[kNormGain].setOnes();
  linear(kTimeW, kTimeB);
  uniform_fill(p[kEmbedding], 1.0, rng);
  linear(kFuse1W, kFuse1B);
  linear(kFuse2W, kFuse2B);
  const double lstm_bound = 1.0 / std::sqrt(static_cast<double>(dims.lstm_hidden));
  uniform_fill(p[kLstmWx], lstm_bound, rng);
  uniform_fill(p[kLstmWh], lstm_bound, rng);
  uniform_fill(p[kLstmB], lstm_bound, rng);
  linear(kHeadW, kHeadB);
  return p;
}

template <class T>
void Batch<T>::check(const ModelDims& dims, bool need_target) const {
  (void)dims;
  const Eigen::Index n = static_cast<Eigen::Index>(steps) * batch;
  if (steps < 1 || batch < 1) fail(ErrorCode::kShapeMismatch, "batch needs at least one step and one window");
  if (rgb.rows() != kRgbDim || rgb.cols() != n || depth.rows() != kDepthDim || depth.cols() != n ||
      state.rows() != kStateDim || state.cols() != n || time.rows() != 1 || time.cols() != n) {
    fail(ErrorCode::kShapeMismatch, "batch inputs do not match steps x batch");
  }
  if (need_target && (target.rows() != kTargetDim || target.cols() != n)) {
    fail(ErrorCode::kShapeMismatch, "batch targets do not match steps x batch");
  }
  if (tokens.size() != static_cast<std::size_t>(batch)) fail(ErrorCode::kShapeMismatch, "one token list per window");
  for (const auto& toks : tokens) {
    for (int t : toks) {
      if (t < 0 || t >= kTokenBuckets) fail(ErrorCode::kShapeMismatch, "token id out of range");
    }
  }
}

template <class T>
Mat<T> forward(const Params<T>& p, const Batch<T>& b) {
  b.check(p.dims, false);
  Cache<T> c;
  run_forward(p, b, c);
  return c.y;
}

template <class T>
T loss_and_grad(const Params<T>& p, const Batch<T>& b, Params<T>* grad) {
  b.check(p.dims, true);
  Cache<T> c;
  run_forward(p, b, c);
  const Mat<T> diff = c.y - b.target;
  const T count = static_cast<T>(diff.size());
  const T loss = diff.squaredNorm() / count;
  if (grad == nullptr) return loss;

  const ModelDims& d = p.dims;
  const int hd = d.lstm_hidden;
  const Eigen::Index n = c.y.cols();
  Params<T>& g = *grad;
  if (g.t.size() != static_cast<std::size_t>(kTensorCount)) g = Params<T>::zeros(d);

  const Mat<T> dy = (T(2) / count) * diff;
  g[kHeadW] = dy * c.h.transpose();
  g[kHeadB] = dy.rowwise().sum();
  const Mat<T> dh_all = p[kHeadW].transpose() * dy;

  Mat<T> dz(4 * hd, n);
  Mat<T> h_prev_all = Mat<T>::Zero(hd, n);
  if (b.steps > 1) h_prev_all.rightCols(n - b.batch) = c.h.leftCols(n - b.batch);
  Mat<T> dh_next = Mat<T>::Zero(hd, b.batch);
  Mat<T> dc_next = Mat<T>::Zero(hd, b.batch);
  for (int s_i = b.steps - 1; s_i >= 0; --s_i) {
    const Eigen::Index col = static_cast<Eigen::Index>(s_i) * b.batch;
    const auto gi = c.gi.middleCols(col, b.batch).array();
    const auto gf = c.gf.middleCols(col, b.batch).array();
    const auto gg = c.gg.middleCols(col, b.batch).array();
    const auto go = c.go.middleCols(col, b.batch).array();
    const auto tc = c.tanh_c.middleCols(col, b.batch).array();
    const Mat<T> c_prev = s_i > 0 ? Mat<T>(c.c.middleCols(col - b.batch, b.batch)) : Mat<T>::Zero(hd, b.batch);

    const Mat<T> dh = dh_all.middleCols(col, b.batch) + dh_next;
    const Mat<T> dc = (dh.array() * go * (T(1) - tc.square()) + dc_next.array()).matrix();
    dz.block(0, col, hd, b.batch) = (dc.array() * gg * gi * (T(1) - gi)).matrix();
    dz.block(hd, col, hd, b.batch) = (dc.array() * c_prev.array() * gf * (T(1) - gf)).matrix();
    dz.block(2 * hd, col, hd, b.batch) = (dc.array() * gi * (T(1) - gg.square())).matrix();
    dz.block(3 * hd, col, hd, b.batch) = (dh.array() * tc * go * (T(1) - go)).matrix();
    dc_next = (dc.array() * gf).matrix();
    dh_next = p[kLstmWh].transpose() * dz.middleCols(col, b.batch);
  }
  g[kLstmWx] = dz * c.a2.transpose();
  g[kLstmWh] = dz * h_prev_all.transpose();
  g[kLstmB] = dz.rowwise().sum();

  const Mat<T> dpre2 = ((p[kLstmWx].transpose() * dz).array() * (c.pre2.array() > T(0)).template cast<T>()).matrix();
  g[kFuse2W] = dpre2 * c.a1.transpose();
  g[kFuse2B] = dpre2.rowwise().sum();
  const Mat<T> dpre1 = ((p[kFuse2W].transpose() * dpre2).array() * (c.pre1.array() > T(0)).template cast<T>()).matrix();
  g[kFuse1W] = dpre1 * c.x.transpose();
  g[kFuse1B] = dpre1.rowwise().sum();
  const Mat<T> dx = p[kFuse1W].transpose() * dpre1;

  Eigen::Index row = 0;
  const Mat<T> der = dx.middleRows(row, d.rgb_embed);
  row += d.rgb_embed;
  g[kRgbW] = der * b.rgb.transpose();
  g[kRgbB] = der.rowwise().sum();
  const Mat<T> ded = dx.middleRows(row, d.depth_embed);
  row += d.depth_embed;
  g[kDepthW] = ded * b.depth.transpose();
  g[kDepthB] = ded.rowwise().sum();
  const Mat<T> des = dx.middleRows(row, d.state_embed);
  row += d.state_embed;
  g[kNormGain] = (des.array() * c.norm.array()).rowwise().sum().matrix();
  g[kNormBias] = des.rowwise().sum();
  const Mat<T> dn = (des.array().colwise() * p[kNormGain].col(0).array()).matrix();
  const Eigen::Matrix<T, 1, Eigen::Dynamic> mean_dn = dn.colwise().mean();
  const Eigen::Matrix<T, 1, Eigen::Dynamic> mean_dn_n = (dn.array() * c.norm.array()).colwise().mean().matrix();
  const Mat<T> ds = ((dn.array().rowwise() - mean_dn.array() - c.norm.array().rowwise() * mean_dn_n.array())
                         .rowwise() *
                     c.inv_std.row(0).array())
                        .matrix();
  g[kStateW] = ds * b.state.transpose();
  g[kStateB] = ds.rowwise().sum();
  const Mat<T> det = dx.middleRows(row, d.time_embed);
  row += d.time_embed;
  g[kTimeW] = det * b.time.transpose();
  g[kTimeB] = det.rowwise().sum();

  g[kEmbedding].setZero();
  for (int j = 0; j < b.batch; ++j) {
    const auto& toks = b.tokens[static_cast<std::size_t>(j)];
    if (toks.empty()) continue;
    Eigen::Matrix<T, Eigen::Dynamic, 1> dp = Eigen::Matrix<T, Eigen::Dynamic, 1>::Zero(d.token_embed);
    for (int s_i = 0; s_i < b.steps; ++s_i) dp += dx.block(row, static_cast<Eigen::Index>(s_i) * b.batch + j, d.token_embed, 1);
    dp /= static_cast<T>(toks.size());
    for (int tok : toks) g[kEmbedding].col(tok) += dp;
  }
  return loss;
}

template struct Params<float>;
template struct Params<double>;
template struct Batch<float>;
template struct Batch<double>;
template Mat<float> forward(const Params<float>&, const Batch<float>&);
template Mat<double> forward(const Params<double>&, const Batch<double>&);
template float loss_and_grad(const Params<float>&, const Batch<float>&, Params<float>*);
template double loss_and_grad(const Params<double>&, const Batch<double>&, Params<double>*);

}  // namespace wheelarm::learning
