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

#include "dsb/value.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dsb/error.hpp"

namespace dsb {

bool values_equal(const Value& a, const Value& b) {
  if (a.index() != b.index()) return false;
  if (const auto* x = std::get_if<double>(&a)) {
    return std::fabs(*x - std::get<double>(b)) <= kNumberTolerance;
  }
  return a == b;
}

bool values_equal(const std::optional<Value>& a, const std::optional<Value>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || values_equal(*a, *b);
}

std::string describe(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, double>) {
          std::ostringstream os;
          os << x;
          return os.str();
        } else {
          return '"' + x + '"';
        }
      },
      v);
}

Json value_to_json(const Value& v) {
  return std::visit([](const auto& x) { return Json(x); }, v);
}

Json value_to_json(const std::optional<Value>& v) {
  return v ? value_to_json(*v) : Json(nullptr);
}

Value value_from_json(const Json& j) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number()) {
    double d = j.get<double>();
    if (!std::isfinite(d)) throw Error(Errc::TypeMismatch, "non-finite number");
    return d;
  }
  if (j.is_string()) return j.get<std::string>();
  throw Error(Errc::TypeMismatch, "unsupported JSON value " + j.dump());
}

std::string describe(const ValueType& t) {
  switch (t.kind) {
    case ValueType::Kind::Bool: return "bool";
    case ValueType::Kind::Number: return "number";
    case ValueType::Kind::String: return "string";
    case ValueType::Kind::Enum: {
      std::string out = "enum(";
      for (std::size_t i = 0; i < t.enum_values.size(); ++i) {
        if (i) out += ',';
        out += t.enum_values[i];
      }
      return out + ")";
    }
  }
  return "?";
}

Json type_to_json(const ValueType& t) {
  if (t.kind == ValueType::Kind::Enum) {
    return Json{{"enum", t.enum_values}};
  }
  return describe(t);
}

ValueType type_from_json(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "bool") return ValueType::boolean();
    if (s == "number") return ValueType::number();
    if (s == "string") return ValueType::string();
    throw Error(Errc::InvalidSchema, "unknown type '" + s + "'");
  }
  if (j.is_object() && j.contains("enum") && j["enum"].is_array() &&
      !j["enum"].empty()) {
    return ValueType::enumeration(j["enum"].get<std::vector<std::string>>());
  }
  throw Error(Errc::InvalidSchema, "bad type " + j.dump());
}

void check_conforms(const Value& v, const ValueType& t, std::string_view where) {
  auto mismatch = [&] {
    throw Error(Errc::TypeMismatch, std::string(where) + " expects " +
                                        describe(t) + ", got " + describe(v));
  };
  switch (t.kind) {
    case ValueType::Kind::Bool:
      if (!std::holds_alternative<bool>(v)) mismatch();
      return;
    case ValueType::Kind::Number:
      if (!std::holds_alternative<double>(v)) mismatch();
      if (!std::isfinite(std::get<double>(v))) mismatch();
      return;
    case ValueType::Kind::String:
      if (!std::holds_alternative<std::string>(v)) mismatch();
      return;
    case ValueType::Kind::Enum: {
      const auto* s = std::get_if<std::string>(&v);
      if (!s) mismatch();
      if (std::find(t.enum_values.begin(), t.enum_values.end(), *s) ==
          t.enum_values.end()) {
        throw Error(Errc::EnumViolation, std::string(where) + ": '" + *s +
                                             "' not in " + describe(t));
      }
      return;
    }
  }
}

bool conforms(const Value& v, const ValueType& t) {
  try {
    check_conforms(v, t, "");
    return true;
  } catch (const Error&) {
    return false;
  }
}

Value dummy_value(const ValueType& t) {
  switch (t.kind) {
    case ValueType::Kind::Bool: return true;
    case ValueType::Kind::Number: return 1.0;
    case ValueType::Kind::String: return std::string("probe");
    case ValueType::Kind::Enum: return t.enum_values.front();
  }
  return std::string("probe");
}

std::string_view to_string(Integrity i) {
  return i == Integrity::High ? "high" : "low";
}

Integrity integrity_from_string(std::string_view s) {
  if (s == "high") return Integrity::High;
  if (s == "low") return Integrity::Low;
  throw Error(Errc::InvalidSchema, "integrity must be high|low, got '" +
                                       std::string(s) + "'");
}

}  // namespace dsb
