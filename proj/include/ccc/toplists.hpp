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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccc/features.hpp"

namespace ccc {

inline constexpr const char* kMissingMarker = "MISSING";
inline constexpr int kDefaultListLimit = 500;

struct RankingComponent {
  std::string feature;
  double weight = 1.0;
};

// One feature ranks raw; several are min-max normalized and mixed by weight.
// Descending unless `ascending` (for "first articles" style lists).
struct RankingSpec {
  std::vector<RankingComponent> components;
  bool ascending = false;
};

// All set predicates must hold. Dates are inclusive YYYYMMDD bounds.
struct SegmentFilter {
  std::optional<QItem> gender;  // matched against claim P21
  bool geolocated_only = false;
  bool keyword_title_only = false;
  std::optional<std::int64_t> date_min;
  std::optional<std::int64_t> date_max;
  std::optional<QItem> origin_territory;  // main_territory equals this
};

struct TopListRow {
  int rank = 0;
  PageId page_id = 0;
  QItem qitem;
  std::string page_title;
  std::vector<double> features;  // parallel to the spec components
  double score = 0.0;
  std::string main_territory;
  std::string availability;  // title on the target wiki, or MISSING
};

struct TopList {
  std::string origin;  // wiki the list was built from
  std::string target;  // wiki availability was checked against
  std::vector<std::string> feature_names;
  bool ascending = false;
  std::vector<TopListRow> rows;
};

TopList generate_top_list(const std::vector<QualificationRecord>& records,
                          const WikiSnapshot& snapshot, const RankingSpec& spec,
                          const SegmentFilter& filter, const std::string& target,
                          int limit = kDefaultListLimit);

struct CoverageCell {
  std::string origin;
  std::string target;
  std::int64_t rows = 0;
  std::int64_t available = 0;
  bool has_data = false;  // false for empty lists, which carry no share
  double share = 0.0;
};

std::vector<CoverageCell> coverage_overview(const std::vector<TopList>& lists);

enum class TableFormat { Csv, Html };

TableFormat table_format_from_string(const std::string& name);

void render_table(const TopList& list, TableFormat format, const std::filesystem::path& path);
void render_table(const std::vector<CoverageCell>& matrix, TableFormat format,
                  const std::filesystem::path& path);

// A named list configuration. The shipped presets are conventions, not
// canon; everything about them can be overridden from JSON.
struct ListPreset {
  std::string name;
  RankingSpec spec;
  SegmentFilter filter;
  int limit = kDefaultListLimit;
};

std::vector<ListPreset> default_presets(std::int64_t wiki_start_date,
                                        std::int64_t reference_date,
                                        const QItem& women_qitem = "Q6581072",
                                        const QItem& men_qitem = "Q6581097");

ListPreset list_preset_from_json(const nlohmann::json& spec);

}  // namespace ccc
