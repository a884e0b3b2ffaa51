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

#include "ccc/jsonl.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace ccc {

void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const nlohmann::json&)>& fn) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open " + path.string());
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    try {
      fn(j);
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

namespace {

const nlohmann::json& require_key(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ValidationError(std::string("missing field \"") + key + "\"");
  }
  return *it;
}

}  // namespace

std::int64_t json_int(const nlohmann::json& j, const char* key) {
  const auto& v = require_key(j, key);
  if (!v.is_number_integer()) {
    throw ValidationError(std::string("field \"") + key + "\" is not an integer");
  }
  return v.get<std::int64_t>();
}

std::int64_t json_int_or(const nlohmann::json& j, const char* key, std::int64_t fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  if (!it->is_number_integer()) {
    throw ValidationError(std::string("field \"") + key + "\" is not an integer");
  }
  return it->get<std::int64_t>();
}

double json_double(const nlohmann::json& j, const char* key) {
  const auto& v = require_key(j, key);
  if (!v.is_number()) {
    throw ValidationError(std::string("field \"") + key + "\" is not a number");
  }
  return v.get<double>();
}

std::string json_string(const nlohmann::json& j, const char* key) {
  const auto& v = require_key(j, key);
  if (!v.is_string()) {
    throw ValidationError(std::string("field \"") + key + "\" is not a string");
  }
  return v.get<std::string>();
}

std::string json_string_or(const nlohmann::json& j, const char* key, const std::string& fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  if (!it->is_string()) {
    throw ValidationError(std::string("field \"") + key + "\" is not a string");
  }
  return it->get<std::string>();
}

}  // namespace ccc
