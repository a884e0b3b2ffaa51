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

#include <map>
#include <string>
#include <vector>

#include "ccc/atlas.hpp"
#include "ccc/features.hpp"

namespace ccc {

inline constexpr const char* kUnassigned = "Unassigned";

struct AttributionResult {
  std::map<PageId, std::string> main_territory;  // qitem or "Unassigned"
  std::map<PageId, std::string> rule;            // geo|keyword|majority|propagated|unassigned
};

// Fills main_territory and attribution_rule on every ccc_binary=1 record.
// Rule order: geotag territory, unambiguous non-language title keyword,
// majority over territorial evidence (ties finalize as Unassigned), then
// round-based propagation through evidence referencing attributed articles.
AttributionResult attribute_main_territory(std::vector<QualificationRecord>& records,
                                           const LanguageAtlas& atlas,
                                           const std::string& language, int max_rounds = 10);

// Share of CCC articles per assigned territory, Unassigned included; shares
// sum to 1. Empty map when there are no CCC articles.
std::map<std::string, double> territory_distribution(
    const std::vector<QualificationRecord>& records);

}  // namespace ccc
