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

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace ccc::csv {

// RFC 4180 quoting: fields containing comma, quote or newline are quoted,
// embedded quotes doubled. Everything else is written verbatim.
std::string escape(std::string_view field);

std::string join_row(const std::vector<std::string>& fields);

// Streaming RFC 4180 reader. Rows end at an unquoted LF; CR before LF is
// consumed. Quoted fields may contain separators and newlines.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Returns false at end of input. `line` reports the 1-based line the row
  // started on, for error messages.
  bool next(std::vector<std::string>& row);
  std::size_t line() const { return row_start_line_; }

 private:
  std::istream& in_;
  std::size_t current_line_ = 0;
  std::size_t row_start_line_ = 0;
};

}  // namespace ccc::csv
