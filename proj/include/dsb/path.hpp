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

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace dsb {

/// Location of a variable in the data store tree, e.g.
/// `devices/cameras/cam1/is_streaming`.
///
/// Segments match `[a-z0-9_-]+` and a path has at least two of them.
class Path {
 public:
  Path() = default;

  /// Parses the canonical `/`-joined form. Throws Error{InvalidPath}.
  static Path parse(std::string_view text);
  static Path from_segments(std::vector<std::string> segments);

  const std::vector<std::string>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  const std::string& str() const { return canonical_; }
  const std::string& leaf() const { return segments_.back(); }

  /// True if `prefix` names this path or one of its ancestors.
  bool starts_with(const Path& prefix) const;
  Path parent() const;
  Path child(std::string_view segment) const;

  friend bool operator==(const Path& a, const Path& b) {
    return a.canonical_ == b.canonical_;
  }
  friend std::strong_ordering operator<=>(const Path& a, const Path& b) {
    return a.canonical_ <=> b.canonical_;
  }

 private:
  std::vector<std::string> segments_;
  std::string canonical_;
};

bool is_valid_segment(std::string_view segment);

/// Path with `*` segments; `*` matches exactly one segment.
class PathPattern {
 public:
  PathPattern() = default;

  /// Throws Error{InvalidPattern}.
  static PathPattern parse(std::string_view text);

  bool matches(const Path& path) const;
  bool has_wildcard() const;
  const std::string& str() const { return canonical_; }
  const std::vector<std::string>& segments() const { return segments_; }

  friend bool operator==(const PathPattern& a, const PathPattern& b) {
    return a.canonical_ == b.canonical_;
  }

 private:
  std::vector<std::string> segments_;
  std::string canonical_;
};

}  // namespace dsb
