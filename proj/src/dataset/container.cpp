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

#include "dataset/container.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "common/codec.hpp"

namespace wheelarm::dataset {

static_assert(std::endian::native == std::endian::little, "container I/O assumes a little-endian host");

namespace fs = std::filesystem;

namespace {

constexpr const char* kChecksums = "CHECKSUMS";

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const std::streamoff size = in.tellg();
  in.seekg(0, std::ios::beg);
  std::vector<std::uint8_t> data(static_cast<std::size_t>(size));
  if (size > 0) in.read(reinterpret_cast<char*>(data.data()), size);
  if (!in) fail(ErrorCode::kIoError, "cannot read " + path.string());
  return data;
}

void write_bytes(const fs::path& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoError, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
}

std::span<const std::uint8_t> as_bytes(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

template <typename T>
void put(std::vector<std::uint8_t>& out, std::size_t offset, T value) {
  std::memcpy(out.data() + offset, &value, sizeof(T));
}

template <typename T>
T get(const std::vector<std::uint8_t>& in, std::size_t offset) {
  T value;
  std::memcpy(&value, in.data() + offset, sizeof(T));
  return value;
}

std::string hex32(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

std::string frame_png(const std::string& cam, std::size_t i) { return "frames/" + cam + "/" + std::to_string(i) + ".png"; }
std::string frame_depth(const std::string& cam, std::size_t i) {
  return "frames/" + cam + "/depth_" + std::to_string(i) + ".f32";
}
std::string topic_file(const std::string& name) { return "topics/" + name + ".f64"; }

struct ChecksumEntry {
  std::uint32_t crc;
  std::string path;
};

std::vector<ChecksumEntry> parse_checksums(const fs::path& dir) {
  const fs::path file = dir / kChecksums;
  if (!fs::exists(file)) throw CorruptContainerError(kChecksums, 0, "missing checksum list");
  const std::vector<std::uint8_t> raw = read_bytes(file);
  const std::string text(raw.begin(), raw.end());
  // Last line: "<crc>  CHECKSUMS\n" covering everything before it.
  if (text.empty() || text.back() != '\n') throw CorruptContainerError(kChecksums, raw.size(), "truncated checksum list");
  const std::size_t last_start = text.rfind('\n', text.size() - 2);
  const std::size_t body_len = last_start == std::string::npos ? 0 : last_start + 1;
  const std::string self_line = text.substr(body_len, text.size() - body_len - 1);
  if (self_line.size() < 10 || self_line.substr(8) != std::string("  ") + kChecksums) {
    throw CorruptContainerError(kChecksums, body_len, "malformed self-check line");
  }
  const std::string body = text.substr(0, body_len);
  if (hex32(crc32c(std::string_view(body))) != self_line.substr(0, 8)) {
    throw CorruptContainerError(kChecksums, body_len, "checksum list does not match its own checksum");
  }
  std::vector<ChecksumEntry> entries;
  std::istringstream lines(body);
  std::string line;
  std::size_t offset = 0;
  while (std::getline(lines, line)) {
    if (line.size() < 11 || line[8] != ' ' || line[9] != ' ') {
      throw CorruptContainerError(kChecksums, offset, "malformed checksum line");
    }
    ChecksumEntry e;
    try {
      std::size_t used = 0;
      e.crc = static_cast<std::uint32_t>(std::stoul(line.substr(0, 8), &used, 16));
      if (used != 8) throw std::invalid_argument("hex");
    } catch (const std::exception&) {
      throw CorruptContainerError(kChecksums, offset, "malformed checksum value");
    }
    e.path = line.substr(10);
    entries.push_back(std::move(e));
    offset += line.size() + 1;
  }
  return entries;
}

Json index_entry(const TopicData& t) {
  return Json{{"name", t.name},
              {"file", topic_file(t.name)},
              {"rows", t.rows()},
              {"cols", t.cols()},
              {"columns", t.columns},
              {"timestamp_column", 0},
              {"orientation_blocks", t.orientation_blocks}};
}

}  // namespace

std::vector<std::uint8_t> encode_f64(std::size_t rows, std::size_t cols, const std::vector<double>& values) {
  if (values.size() != rows * cols) fail(ErrorCode::kShapeMismatch, "encode_f64: payload does not match shape");
  std::vector<std::uint8_t> out(kF64HeaderSize + values.size() * sizeof(double));
  std::memcpy(out.data(), "WATR", 4);
  put<std::uint32_t>(out, 4, kF64Version);
  put<std::uint64_t>(out, 8, rows);
  put<std::uint64_t>(out, 16, cols);
  if (!values.empty()) std::memcpy(out.data() + kF64HeaderSize, values.data(), values.size() * sizeof(double));
  std::vector<std::uint8_t> covered(out.begin() + 8, out.begin() + 24);
  covered.insert(covered.end(), out.begin() + kF64HeaderSize, out.end());
  put<std::uint32_t>(out, 24, crc32c(covered));
  put<std::uint32_t>(out, 28, 0);
  return out;
}

std::vector<double> decode_f64(const std::vector<std::uint8_t>& bytes, const std::string& file, std::size_t& rows,
                               std::size_t& cols) {
  if (bytes.size() < kF64HeaderSize) throw CorruptContainerError(file, bytes.size(), "truncated header");
  if (std::memcmp(bytes.data(), "WATR", 4) != 0) throw CorruptContainerError(file, 0, "bad magic");
  if (get<std::uint32_t>(bytes, 4) != kF64Version) throw CorruptContainerError(file, 4, "unsupported version");
  if (get<std::uint32_t>(bytes, 28) != 0) throw CorruptContainerError(file, 28, "reserved header field is not zero");
  const std::uint64_t r = get<std::uint64_t>(bytes, 8);
  const std::uint64_t c = get<std::uint64_t>(bytes, 16);
  const std::uint64_t payload = bytes.size() - kF64HeaderSize;
  if (c != 0 && r > payload / sizeof(double) / c) throw CorruptContainerError(file, bytes.size(), "truncated payload");
  if (r * c * sizeof(double) != payload) {
    throw CorruptContainerError(file, kF64HeaderSize + std::min<std::uint64_t>(payload, r * c * sizeof(double)),
                                "payload size does not match the header");
  }
  std::vector<std::uint8_t> covered(bytes.begin() + 8, bytes.begin() + 24);
  covered.insert(covered.end(), bytes.begin() + kF64HeaderSize, bytes.end());
  if (crc32c(covered) != get<std::uint32_t>(bytes, 24)) throw CorruptContainerError(file, 24, "crc32c mismatch");
  rows = r;
  cols = c;
  std::vector<double> values(r * c);
  if (!values.empty()) std::memcpy(values.data(), bytes.data() + kF64HeaderSize, payload);
  return values;
}

void write_container(const Recording& rec, const fs::path& dir) {
  if (fs::exists(dir) && !fs::exists(dir / "manifest.json")) {
    fail(ErrorCode::kIoError, dir.string() + " exists and is not a container");
  }
  fs::path staging = dir;
  staging += ".staging";
  std::error_code ec;
  fs::remove_all(staging, ec);
  fs::create_directories(staging / "topics", ec);
  if (ec) fail(ErrorCode::kIoError, "cannot create " + staging.string() + ": " + ec.message());

  std::map<std::string, std::uint32_t> sums;
  auto emit = [&](const std::string& rel, std::span<const std::uint8_t> data) {
    write_bytes(staging / rel, data);
    sums[rel] = crc32c(data);
  };

  Json manifest{{"format", kDatasetFormat}, {"kind", rec.kind}, {"manifest", manifest_to_json(rec.manifest)},
                {"meta", rec.meta}};
  emit("manifest.json", as_bytes(manifest.dump(2) + "\n"));

  Json index{{"format", kDatasetFormat}, {"topics", Json::array()}, {"cameras", Json::array()}};
  for (const TopicData& t : rec.topics) {
    index["topics"].push_back(index_entry(t));
    emit(topic_file(t.name), encode_f64(t.rows(), t.cols(), t.values));
  }
  for (const auto& [cam, images] : rec.frames) {
    fs::create_directories(staging / "frames" / cam, ec);
    if (ec) fail(ErrorCode::kIoError, "cannot create frame directory: " + ec.message());
    const int w = images.empty() ? 0 : images.front().width;
    const int h = images.empty() ? 0 : images.front().height;
    index["cameras"].push_back({{"id", cam}, {"topic", camera_topic(cam)}, {"count", images.size()}, {"width", w},
                                {"height", h}});
    for (std::size_t i = 0; i < images.size(); ++i) {
      const Image& img = images[i];
      if (img.width != w || img.height != h || img.depth.size() != static_cast<std::size_t>(w) * h) {
        fail(ErrorCode::kShapeMismatch, "camera " + cam + ": frames must share one resolution");
      }
      emit(frame_png(cam, i), encode_png_rgb(img.rgb, w, h));
      emit(frame_depth(cam, i),
           std::span(reinterpret_cast<const std::uint8_t*>(img.depth.data()), img.depth.size() * sizeof(float)));
    }
  }
  emit("index.json", as_bytes(index.dump(2) + "\n"));

  std::string list;
  for (const auto& [rel, crc] : sums) list += hex32(crc) + "  " + rel + "\n";
  list += hex32(crc32c(std::string_view(list))) + "  " + kChecksums + "\n";
  write_bytes(staging / kChecksums, as_bytes(list));

  fs::remove_all(dir, ec);
  if (ec) fail(ErrorCode::kIoError, "cannot replace " + dir.string() + ": " + ec.message());
  if (dir.has_parent_path()) fs::create_directories(dir.parent_path(), ec);
  fs::rename(staging, dir, ec);
  if (ec) fail(ErrorCode::kIoError, "cannot move container into place: " + ec.message());
}

void verify_container(const fs::path& dir) {
  if (!fs::is_directory(dir)) fail(ErrorCode::kIoError, dir.string() + " is not a container directory");
  std::set<std::string> listed;
  for (const ChecksumEntry& e : parse_checksums(dir)) {
    const fs::path file = dir / e.path;
    if (e.path.find("..") != std::string::npos || !fs::is_regular_file(file)) {
      throw CorruptContainerError(e.path, 0, "listed file is missing");
    }
    const std::vector<std::uint8_t> bytes = read_bytes(file);
    if (file.extension() == ".f64") {
      std::size_t r = 0, c = 0;
      decode_f64(bytes, e.path, r, c);
    }
    if (crc32c(bytes) != e.crc) throw CorruptContainerError(e.path, 0, "checksum mismatch");
    listed.insert(e.path);
  }
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string rel = fs::relative(entry.path(), dir).generic_string();
    if (rel != kChecksums && !listed.count(rel)) throw CorruptContainerError(rel, 0, "file is not covered by CHECKSUMS");
  }
}

Recording read_container(const fs::path& dir) {
  verify_container(dir);
  const std::vector<ChecksumEntry> entries = parse_checksums(dir);
  auto listed = [&](const std::string& rel) {
    for (const auto& e : entries) {
      if (e.path == rel) return;
    }
    throw CorruptContainerError(rel, 0, "file is not covered by CHECKSUMS");
  };

  listed("manifest.json");
  listed("index.json");
  const Json manifest = read_json_file(dir / "manifest.json", ErrorCode::kCorruptContainer);
  const Json index = read_json_file(dir / "index.json", ErrorCode::kCorruptContainer);
  if (manifest.value("format", std::string()) != kDatasetFormat || index.value("format", std::string()) != kDatasetFormat) {
    fail(ErrorCode::kSchemaMismatch, dir.string() + ": not a " + std::string(kDatasetFormat) + " container");
  }

  Recording rec;
  try {
    rec.kind = manifest.at("kind").get<std::string>();
    rec.manifest = manifest_from_json(manifest.at("manifest"));
    rec.meta = manifest.at("meta");
    for (const Json& t : index.at("topics")) {
      TopicData topic;
      topic.name = t.at("name").get<std::string>();
      topic.columns = t.at("columns").get<std::vector<std::string>>();
      topic.orientation_blocks = t.at("orientation_blocks").get<std::vector<int>>();
      const std::string rel = t.at("file").get<std::string>();
      listed(rel);
      std::size_t r = 0, c = 0;
      topic.values = decode_f64(read_bytes(dir / rel), rel, r, c);
      if (c != topic.cols() || r != t.at("rows").get<std::size_t>()) {
        fail(ErrorCode::kSchemaMismatch, rel + ": shape disagrees with index.json");
      }
      rec.topics.push_back(std::move(topic));
    }
    for (const Json& cam : index.at("cameras")) {
      const std::string id = cam.at("id").get<std::string>();
      const std::size_t count = cam.at("count").get<std::size_t>();
      const int w = cam.at("width").get<int>();
      const int h = cam.at("height").get<int>();
      std::vector<Image>& images = rec.frames[id];
      for (std::size_t i = 0; i < count; ++i) {
        listed(frame_png(id, i));
        listed(frame_depth(id, i));
        Image img;
        img.rgb = decode_png_rgb(read_bytes(dir / frame_png(id, i)), img.width, img.height);
        if (img.width != w || img.height != h) fail(ErrorCode::kSchemaMismatch, frame_png(id, i) + ": wrong size");
        const std::vector<std::uint8_t> raw = read_bytes(dir / frame_depth(id, i));
        if (raw.size() != static_cast<std::size_t>(w) * h * sizeof(float)) {
          throw CorruptContainerError(frame_depth(id, i), raw.size(), "depth raster has the wrong size");
        }
        img.depth.resize(static_cast<std::size_t>(w) * h);
        std::memcpy(img.depth.data(), raw.data(), raw.size());
        images.push_back(std::move(img));
      }
    }
  } catch (const Json::exception& e) {
    fail(ErrorCode::kSchemaMismatch, dir.string() + ": " + e.what());
  }
  return rec;
}

std::string read_container_kind(const fs::path& dir) {
  const Json manifest = read_json_file(dir / "manifest.json", ErrorCode::kCorruptContainer);
  if (!manifest.is_object() || manifest.value("format", "") != kDatasetFormat || !manifest.contains("kind") ||
      !manifest["kind"].is_string()) {
    fail(ErrorCode::kSchemaMismatch, dir.string() + ": not a " + std::string(kDatasetFormat) + " container");
  }
  return manifest["kind"].get<std::string>();
}

std::vector<fs::path> find_containers(const fs::path& root) {
  std::vector<fs::path> out;
  if (root.extension() == ".watr" && fs::is_directory(root)) return {root};
  if (!fs::is_directory(root)) fail(ErrorCode::kIoError, root.string() + " is not a directory");
  for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator(); ++it) {
    if (it->is_directory() && it->path().extension() == ".watr") {
      out.push_back(it->path());
      it.disable_recursion_pending();
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace wheelarm::dataset
