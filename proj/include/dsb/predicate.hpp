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

#include "dsb/datastore.hpp"
#include "dsb/value.hpp"

namespace dsb {

/// Condition over a single change event: `equals(v)` fires when the new
/// value equals v, `changed` on any change, `crossed` when a number passes
/// a threshold in the given direction.
struct Predicate {
  enum class Kind { Equals, Changed, Crossed };
  enum class Direction { Up, Down };

  Kind kind = Kind::Changed;
  std::optional<Value> value;  // Equals
  double threshold = 0.0;      // Crossed
  Direction direction = Direction::Up;

  static Predicate equals(Value v) { return {Kind::Equals, std::move(v), 0.0, Direction::Up}; }
  static Predicate changed() { return {}; }
  static Predicate crossed(double t, Direction d) { return {Kind::Crossed, std::nullopt, t, d}; }

  bool matches(const ChangeEvent& e) const;
  /// Throws Error{TypeMismatch} if the predicate cannot apply to `t`.
  void check_type(const ValueType& t) const;

  static Predicate from_json(const Json& j);
  Json to_json() const;
};

}  // namespace dsb
