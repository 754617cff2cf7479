// Copyright 2026 The dsbsim Authors
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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dsb {

/// Fixture files compiled into the library, keyed by path relative to the
/// fixtures directory (e.g. "nest_home.json", "scenarios/lateral-e2e.json").
std::optional<std::string_view> builtin_fixture(std::string_view name);
std::vector<std::string> builtin_fixture_names();

}  // namespace dsb
