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
#include <filesystem>
#include <string>
#include <vector>

#include "dataset/recording.hpp"

namespace wheelarm::dataset {

// On-disk layout of a `<name>.watr/` directory:
//   manifest.json              format, kind, session manifest, meta
//   index.json                 topic shapes, columns, orientation blocks, cameras
//   topics/<topic>.f64         32-byte header + little-endian float64 row-major payload
//   frames/<cam>/<i>.png       8-bit RGB
//   frames/<cam>/depth_<i>.f32 little-endian float32 raster, row-major
//   CHECKSUMS                  "<crc32c hex>  <relative path>" per file, then a
//                              line covering the preceding text
//
// .f64 header: "WATR", u32 version (1), u64 rows, u64 cols,
// u32 crc32c(rows, cols, payload), u32 reserved.
inline constexpr std::uint32_t kF64Version = 1;
inline constexpr std::size_t kF64HeaderSize = 32;

std::vector<std::uint8_t> encode_f64(std::size_t rows, std::size_t cols, const std::vector<double>& values);
// Throws CorruptContainerError naming `file` with the offset of the damage.
std::vector<double> decode_f64(const std::vector<std::uint8_t>& bytes, const std::string& file, std::size_t& rows,
                               std::size_t& cols);

// Writes atomically (staging directory + rename). An existing container at
// `dir` is replaced; any other existing path is an IoError.
void write_container(const Recording& rec, const std::filesystem::path& dir);
Recording read_container(const std::filesystem::path& dir);

// Verifies CHECKSUMS and every .f64 header without decoding images.
void verify_container(const std::filesystem::path& dir);

// Lists container directories (name ends in .watr) under `root`, sorted.
// "raw" or "aligned", from manifest.json alone.
std::string read_container_kind(const std::filesystem::path& dir);

std::vector<std::filesystem::path> find_containers(const std::filesystem::path& root);

}  // namespace wheelarm::dataset
