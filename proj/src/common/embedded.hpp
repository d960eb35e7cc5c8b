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

#include <string_view>

namespace wheelarm {

// Shipped data files (gen3.json, robot.json, scene.json) compiled into the
// library so every tool has working defaults. Throws IoError for unknown names.
std::string_view embedded_file(std::string_view name);

}  // namespace wheelarm
