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

#include "common/json_util.hpp"

#include <fstream>
#include <sstream>

namespace wheelarm {

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(ErrorCode::kIoError, "short write on " + path.string());
}

Json read_json_file(const std::filesystem::path& path, ErrorCode on_parse) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(on_parse, path.string() + ": " + e.what());
  }
}

const Json& require(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(ErrorCode::kSchemaError, (path.empty() ? "<root>" : path) + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(ErrorCode::kSchemaError, join(path, key) + ": missing");
  return *it;
}

double require_number(const Json& obj, const std::string& key, const std::string& path) {
  const Json& v = require(obj, key, path);
  if (!v.is_number()) fail(ErrorCode::kSchemaError, join(path, key) + ": expected a number");
  return v.get<double>();
}

std::string require_string(const Json& obj, const std::string& key, const std::string& path) {
  const Json& v = require(obj, key, path);
  if (!v.is_string()) fail(ErrorCode::kSchemaError, join(path, key) + ": expected a string");
  return v.get<std::string>();
}

std::vector<double> require_numbers(const Json& obj, const std::string& key, const std::string& path,
                                    std::size_t expected) {
  const Json& v = require(obj, key, path);
  const std::string where = join(path, key);
  if (!v.is_array()) fail(ErrorCode::kSchemaError, where + ": expected an array");
  if (expected != 0 && v.size() != expected) {
    fail(ErrorCode::kSchemaError,
         where + ": expected " + std::to_string(expected) + " values, got " + std::to_string(v.size()));
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(ErrorCode::kSchemaError, where + "[" + std::to_string(i) + "]: expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

void require_format(const Json& doc, const std::string& expected, const std::string& what) {
  const std::string got = require_string(doc, "format", "");
  if (got != expected) fail(ErrorCode::kSchemaError, what + ": format is '" + got + "', expected '" + expected + "'");
}

double number_or(const Json& obj, const std::string& key, double fallback, const std::string& path) {
  if (!obj.contains(key)) return fallback;
  return require_number(obj, key, path);
}

}  // namespace wheelarm
