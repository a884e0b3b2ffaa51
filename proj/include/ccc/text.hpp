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

#include <string>
#include <string_view>
#include <vector>

namespace ccc {

// ASCII case folding; bytes >= 0x80 (UTF-8 sequences) pass through unchanged.
std::string fold_case(std::string_view s);

// Splits a title or keyword into case-folded word tokens. Underscores,
// spaces and ASCII punctuation separate tokens; UTF-8 bytes are word
// characters.
std::vector<std::string> tokenize(std::string_view s);

std::string trim(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

}  // namespace ccc
