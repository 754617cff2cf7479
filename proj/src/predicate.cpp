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

#include "dsb/predicate.hpp"

#include "dsb/error.hpp"

namespace dsb {

bool Predicate::matches(const ChangeEvent& e) const {
  if (!e.new_value) return false;
  switch (kind) {
    case Kind::Changed:
      return !values_equal(e.old_value, e.new_value);
    case Kind::Equals:
      return values_equal(*e.new_value, *value);
    case Kind::Crossed: {
      const auto* now = std::get_if<double>(&*e.new_value);
      const auto* before = e.old_value ? std::get_if<double>(&*e.old_value) : nullptr;
      if (!now || !before) return false;
      return direction == Direction::Up ? (*before < threshold && *now >= threshold)
                                        : (*before > threshold && *now <= threshold);
    }
  }
  return false;
}

void Predicate::check_type(const ValueType& t) const {
  if (kind == Kind::Equals) check_conforms(*value, t, "trigger value");
  if (kind == Kind::Crossed && t.kind != ValueType::Kind::Number) {
    throw Error(Errc::TypeMismatch, "crossed needs a number variable");
  }
}

Predicate Predicate::from_json(const Json& j) {
  const auto kind = j.at("predicate").get<std::string>();
  if (kind == "equals") return equals(value_from_json(j.at("value")));
  if (kind == "changed") return changed();
  if (kind == "crossed") {
    const auto dir = j.value("direction", std::string("up"));
    if (dir != "up" && dir != "down") {
      throw Error(Errc::InvalidRoutine, "direction must be up|down");
    }
    return crossed(j.at("threshold").get<double>(),
                   dir == "up" ? Direction::Up : Direction::Down);
  }
  throw Error(Errc::InvalidRoutine, "unknown predicate '" + kind + "'");
}

Json Predicate::to_json() const {
  Json j;
  switch (kind) {
    case Kind::Equals:
      j["predicate"] = "equals";
      j["value"] = value_to_json(*value);
      break;
    case Kind::Changed:
      j["predicate"] = "changed";
      break;
    case Kind::Crossed:
      j["predicate"] = "crossed";
      j["threshold"] = threshold;
      j["direction"] = direction == Direction::Up ? "up" : "down";
      break;
  }
  return j;
}

}  // namespace dsb
