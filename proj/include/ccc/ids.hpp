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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ccc {

using PageId = std::int64_t;
using QItem = std::string;       // Wikidata entity id, e.g. "Q38"
using PropertyId = std::string;  // Wikidata property id, e.g. "P17"

// Raised for bad inputs: malformed files, unknown ids, invalid configuration.
// The CLI maps it to exit code 1; everything else exits 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

bool is_qitem(std::string_view s);
bool is_property_id(std::string_view s);

// Numeric part of a Q/P id, used for deterministic ordering and tie-breaks.
// Empty or malformed ids sort last (INT64_MAX).
std::int64_t id_number(std::string_view s);

// Comparison by id_number, falling back to lexicographic for equal numbers.
bool id_less(std::string_view a, std::string_view b);

}  // namespace ccc
