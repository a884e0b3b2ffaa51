// Copyright 2026 The cccgen Authors
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

#include "ccc/ids.hpp"

#include <charconv>
#include <limits>

namespace ccc {

namespace {

bool matches_prefixed_number(std::string_view s, char prefix) {
  if (s.size() < 2 || s[0] != prefix) return false;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

}  // namespace

bool is_qitem(std::string_view s) { return matches_prefixed_number(s, 'Q'); }

bool is_property_id(std::string_view s) { return matches_prefixed_number(s, 'P'); }

std::int64_t id_number(std::string_view s) {
  if (s.size() < 2) return std::numeric_limits<std::int64_t>::max();
  std::int64_t value = 0;
  const char* first = s.data() + 1;
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) return std::numeric_limits<std::int64_t>::max();
  return value;
}

bool id_less(std::string_view a, std::string_view b) {
  const auto na = id_number(a);
  const auto nb = id_number(b);
  if (na != nb) return na < nb;
  return a < b;
}

}  // namespace ccc
