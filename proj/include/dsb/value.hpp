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
#include <variant>
#include <vector>

#include <json.hpp>

namespace dsb {

using Json = nlohmann::ordered_json;

/// A data-store value. Enum tokens are stored as strings and validated
/// against the variable's declared value set.
using Value = std::variant<bool, double, std::string>;

/// Tolerance for number equality in no-op detection.
inline constexpr double kNumberTolerance = 1e-9;

bool values_equal(const Value& a, const Value& b);
bool values_equal(const std::optional<Value>& a, const std::optional<Value>& b);

std::string describe(const Value& v);
Json value_to_json(const Value& v);
Json value_to_json(const std::optional<Value>& v);
/// Booleans, numbers and strings only; throws Error{TypeMismatch} otherwise.
Value value_from_json(const Json& j);

struct ValueType {
  enum class Kind { Bool, Number, String, Enum };

  Kind kind = Kind::String;
  std::vector<std::string> enum_values;

  static ValueType boolean() { return {Kind::Bool, {}}; }
  static ValueType number() { return {Kind::Number, {}}; }
  static ValueType string() { return {Kind::String, {}}; }
  static ValueType enumeration(std::vector<std::string> values) {
    return {Kind::Enum, std::move(values)};
  }

  friend bool operator==(const ValueType&, const ValueType&) = default;
};

std::string describe(const ValueType& t);
Json type_to_json(const ValueType& t);
ValueType type_from_json(const Json& j);

/// Throws Error{TypeMismatch} or Error{EnumViolation}.
void check_conforms(const Value& v, const ValueType& t, std::string_view where);
bool conforms(const Value& v, const ValueType& t);

/// The placeholder a black-box prober writes: true, 1, "probe", or the
/// first declared enum token.
Value dummy_value(const ValueType& t);

enum class Integrity { Low, High };

inline Integrity min_integrity(Integrity a, Integrity b) {
  return (a == Integrity::Low || b == Integrity::Low) ? Integrity::Low
                                                      : Integrity::High;
}

std::string_view to_string(Integrity i);
Integrity integrity_from_string(std::string_view s);

}  // namespace dsb
