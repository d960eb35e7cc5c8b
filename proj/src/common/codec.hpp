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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wheelarm {

std::uint32_t crc32c(std::span<const std::uint8_t> bytes);
std::uint32_t crc32c(std::string_view bytes);

std::string base64_encode(std::span<const std::uint8_t> bytes);
// Throws SchemaError on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

// 8-bit RGB PNG, deterministic output for identical input.
std::vector<std::uint8_t> encode_png_rgb(std::span<const std::uint8_t> rgb, int width, int height);
// Decodes an 8-bit RGB PNG; throws CorruptContainer-compatible IoError on failure.
std::vector<std::uint8_t> decode_png_rgb(std::span<const std::uint8_t> png, int& width, int& height);

}  // namespace wheelarm
