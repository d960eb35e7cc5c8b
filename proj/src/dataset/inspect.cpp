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

#include "dataset/inspect.hpp"

#include <algorithm>
#include <cstdio>

namespace wheelarm::dataset {

std::vector<TopicSummary> summarize(const Recording& rec) {
  std::vector<TopicSummary> out;
  for (const TopicData& t : rec.topics) {
    TopicSummary s;
    s.name = t.name;
    s.rows = t.rows();
    s.channels = t.cols() == 0 ? 0 : t.cols() - 1;
    if (s.rows > 0) {
      s.t_first = t.time(0);
      s.t_last = t.time(s.rows - 1);
    }
    for (std::size_t r = 1; r < s.rows; ++r) s.max_gap = std::max(s.max_gap, t.time(r) - t.time(r - 1));
    out.push_back(s);
  }
  return out;
}

std::string format_summary(const Recording& rec) {
  std::string text = "kind: " + rec.kind + "\n";
  text += "file_name: " + rec.manifest.file_name + "\n";
  text += "task: " + rec.manifest.task_label + "\n";
  text += "instruction: " + rec.manifest.instruction + "\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %8s %8s %12s %12s %10s\n", "topic", "rows", "channels", "t_first",
                "t_last", "max_gap");
  text += line;
  for (const TopicSummary& s : summarize(rec)) {
    std::snprintf(line, sizeof line, "%-16s %8zu %8zu %12.6f %12.6f %10.6f\n", s.name.c_str(), s.rows, s.channels,
                  s.t_first, s.t_last, s.max_gap);
    text += line;
  }
  for (const auto& [cam, images] : rec.frames) {
    std::snprintf(line, sizeof line, "frames/%-9s %8zu\n", cam.c_str(), images.size());
    text += line;
  }
  return text;
}

Json summary_to_json(const Recording& rec) {
  Json topics = Json::array();
  for (const TopicSummary& s : summarize(rec)) {
    topics.push_back({{"name", s.name}, {"rows", s.rows}, {"channels", s.channels}, {"t_first", s.t_first},
                      {"t_last", s.t_last}, {"max_gap", s.max_gap}});
  }
  Json frames = Json::object();
  for (const auto& [cam, images] : rec.frames) frames[cam] = images.size();
  return {{"kind", rec.kind}, {"manifest", manifest_to_json(rec.manifest)}, {"topics", topics}, {"frames", frames}};
}

}  // namespace wheelarm::dataset
