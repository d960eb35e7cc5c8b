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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "common/error.hpp"

namespace wheelarm {

using Json = nlohmann::json;

// Reads and parses a JSON document; IoError if unreadable, `on_parse` code if
// the text is not JSON.
Json read_json_file(const std::filesystem::path& path, ErrorCode on_parse = ErrorCode::kSchemaError);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

// Schema helpers. `path` is the dotted key path used in error messages, e.g.
// "objects[3].dimensions".
const Json& require(const Json& obj, const std::string& key, const std::string& path);
double require_number(const Json& obj, const std::string& key, const std::string& path);
std::string require_string(const Json& obj, const std::string& key, const std::string& path);
std::vector<double> require_numbers(const Json& obj, const std::string& key, const std::string& path,
                                    std::size_t expected = 0);
void require_format(const Json& doc, const std::string& expected, const std::string& what);

double number_or(const Json& obj, const std::string& key, double fallback, const std::string& path);

}  // namespace wheelarm
