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

#include "dataset/recording.hpp"

namespace wheelarm::dataset {

struct TopicSummary {
  std::string name;
  std::size_t rows = 0;
  std::size_t channels = 0;  // excluding the timestamp column
  double t_first = 0.0;
  double t_last = 0.0;
  double max_gap = 0.0;  // largest gap between consecutive timestamps
};

std::vector<TopicSummary> summarize(const Recording& rec);
// Fixed-width table, one row per topic, preceded by a kind/manifest header.
std::string format_summary(const Recording& rec);
Json summary_to_json(const Recording& rec);

}  // namespace wheelarm::dataset
