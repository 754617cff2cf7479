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

#include "dsb/path.hpp"

#include <algorithm>

#include "dsb/error.hpp"

namespace dsb {
namespace {

std::vector<std::string> split(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find('/', start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos
                                            ? std::string_view::npos
                                            : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& segments) {
  std::string out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i) out += '/';
    out += segments[i];
  }
  return out;
}

}  // namespace

bool is_valid_segment(std::string_view segment) {
  if (segment.empty()) return false;
  return std::all_of(segment.begin(), segment.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '-';
  });
}

Path Path::parse(std::string_view text) {
  return from_segments(split(text));
}

Path Path::from_segments(std::vector<std::string> segments) {
  if (segments.size() < 2) {
    throw Error(Errc::InvalidPath, "need at least two segments: " + join(segments));
  }
  for (const auto& s : segments) {
    if (!is_valid_segment(s)) {
      throw Error(Errc::InvalidPath, "bad segment '" + s + "' in " + join(segments));
    }
  }
  Path p;
  p.canonical_ = join(segments);
  p.segments_ = std::move(segments);
  return p;
}

bool Path::starts_with(const Path& prefix) const {
  if (prefix.segments_.size() > segments_.size()) return false;
  return std::equal(prefix.segments_.begin(), prefix.segments_.end(),
                    segments_.begin());
}

Path Path::parent() const {
  std::vector<std::string> segs(segments_.begin(), segments_.end() - 1);
  return from_segments(std::move(segs));
}

Path Path::child(std::string_view segment) const {
  auto segs = segments_;
  segs.emplace_back(segment);
  return from_segments(std::move(segs));
}

PathPattern PathPattern::parse(std::string_view text) {
  auto segments = split(text);
  if (segments.size() < 2) {
    throw Error(Errc::InvalidPattern, std::string(text));
  }
  for (const auto& s : segments) {
    if (s != "*" && !is_valid_segment(s)) {
      throw Error(Errc::InvalidPattern, std::string(text));
    }
  }
  PathPattern p;
  p.canonical_ = join(segments);
  p.segments_ = std::move(segments);
  return p;
}

bool PathPattern::matches(const Path& path) const {
  const auto& segs = path.segments();
  if (segs.size() != segments_.size()) return false;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (segments_[i] != "*" && segments_[i] != segs[i]) return false;
  }
  return true;
}

bool PathPattern::has_wildcard() const {
  return std::find(segments_.begin(), segments_.end(), "*") != segments_.end();
}

}  // namespace dsb
