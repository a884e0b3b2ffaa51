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

#include <filesystem>
#include <functional>

#include <json.hpp>

#include "ccc/ids.hpp"

namespace ccc {

// Applies `fn` to every non-blank line of a JSON Lines file. Parse failures
// and ValidationErrors thrown by `fn` are rethrown as "<file>:<line>: msg".
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const nlohmann::json&)>& fn);

// Field accessors that raise ValidationError with the field name instead of
// nlohmann's type_error, so loaders produce readable messages.
std::int64_t json_int(const nlohmann::json& j, const char* key);
std::int64_t json_int_or(const nlohmann::json& j, const char* key, std::int64_t fallback);
double json_double(const nlohmann::json& j, const char* key);
std::string json_string(const nlohmann::json& j, const char* key);
std::string json_string_or(const nlohmann::json& j, const char* key, const std::string& fallback);

}  // namespace ccc
