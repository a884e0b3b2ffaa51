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

#include <array>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccc/atlas.hpp"
#include "ccc/ids.hpp"
#include "ccc/snapshot.hpp"

namespace ccc {

enum class PropertyGroup {
  Country = 0,
  Location,
  LanguageStrong,
  CreatedBy,
  PartOf,
  LanguageWeak,
  Affiliation,
  HasPart,
};
inline constexpr int kPropertyGroupCount = 8;

const char* group_name(PropertyGroup g);

class PropertyCatalog {
 public:
  static PropertyCatalog defaults();
  // JSON file mapping group name to a property list; unlisted groups keep
  // their defaults.
  static PropertyCatalog load(const std::filesystem::path& path);

  const std::vector<PropertyId>& group(PropertyGroup g) const;
  std::optional<PropertyGroup> group_of(const PropertyId& property) const;

 private:
  void index();  // enforces pairwise-disjoint groups

  std::array<std::vector<PropertyId>, kPropertyGroupCount> groups_;
  std::map<PropertyId, PropertyGroup> by_property_;
};

// Entities reachable from a territory seed set via location-group claims.
// depth 0 entries are the seeds; roots records which seeds each entity
// resolves to (a seed roots to itself).
struct LocationClosure {
  std::map<QItem, int> depth;
  std::map<QItem, std::set<QItem>> roots;

  bool contains(const QItem& q) const { return depth.count(q) > 0; }
  const std::set<QItem>& roots_of(const QItem& q) const;
};

LocationClosure build_location_closure(const WikiSnapshot& snapshot,
                                       const std::set<QItem>& seeds,
                                       const PropertyCatalog& catalog,
                                       int max_rounds = 10);

struct CrawlResult {
  int level = -1;  // shortest seed-to-article distance; -1 when unreachable
  std::int64_t num_paths = 0;
  std::vector<QItem> territories;  // owners reached along shortest paths, sorted
};

// Seeds are categories whose title matches the lexicon; breadth-first
// descent over subcategory edges, visited once, capped at depth_cap.
std::map<PageId, CrawlResult> category_crawl(const WikiSnapshot& snapshot,
                                             const Lexicon& lexicon,
                                             int depth_cap = 15);

struct EvidencePair {
  PropertyId property;
  QItem value;

  friend bool operator==(const EvidencePair&, const EvidencePair&) = default;
};

// Orders by property number then value number, the emission order.
bool evidence_less(const EvidencePair& a, const EvidencePair& b);

enum class QualLabel {
  ReliablyCCC,
  PotentiallyCCC,
  ReliablyNonCCC,
  PotentiallyNonCCC,
  Unqualified,
};

std::string to_string(QualLabel label);
QualLabel qual_label_from_string(const std::string& s);

struct QualificationRecord {
  PageId page_id = 0;
  QItem qitem;
  std::string page_title;
  std::int64_t date_created = 0;

  bool has_geotag = false;
  double lat = 0.0;
  double lon = 0.0;
  int ccc_geolocated = 0;  // 1 home, -1 abroad, 0 none
  QItem geo_territory;     // matched territory when ccc_geolocated != 0
  std::string iso3166;
  std::string iso31662;

  std::string keyword_title;  // matched keyword, empty when none
  std::vector<LexiconOwner> keyword_owners;

  CrawlResult crawl;

  std::array<std::vector<EvidencePair>, kPropertyGroupCount> evidence;
  std::array<std::vector<EvidencePair>, kPropertyGroupCount> other_evidence;

  // Home territories each location evidence entry resolves to, one batch per
  // entry; feeds the majority rule downstream.
  std::vector<QItem> location_root_qitems;

  std::int64_t inlinks_from_ccc = 0;
  std::int64_t outlinks_to_ccc = 0;
  std::int64_t inlinks_from_abroad = 0;
  std::int64_t outlinks_to_abroad = 0;
  double percent_inlinks_from_ccc = 0.0;
  double percent_outlinks_to_ccc = 0.0;
  double percent_inlinks_from_abroad = 0.0;
  double percent_outlinks_to_abroad = 0.0;

  int num_retrieval_strategies = 0;
  QualLabel class_label = QualLabel::Unqualified;

  // Set by the classifier and attribution stages.
  int ccc_binary = 0;
  std::string main_territory;    // qitem, "Unassigned", or empty for non-CCC
  std::string attribution_rule;  // geo | keyword | majority | propagated | unassigned

  const std::vector<EvidencePair>& group_evidence(PropertyGroup g) const {
    return evidence[static_cast<int>(g)];
  }
  const std::vector<EvidencePair>& group_other(PropertyGroup g) const {
    return other_evidence[static_cast<int>(g)];
  }
};

struct GeoVerdict {
  int verdict = 0;  // 1 home, -1 abroad, 0 none
  QItem territory;
};

GeoVerdict qualify_geolocated(const WikiSnapshot& snapshot, const LanguageAtlas& atlas,
                              const BoundarySet& boundaries, PageId page);

// Claim values of `properties` accepted by `accept`, deduped and sorted.
std::vector<EvidencePair> match_claims(const WikidataEntity& entity,
                                       const std::vector<PropertyId>& properties,
                                       const std::function<bool(const QItem&)>& accept);

struct LinkCounts {
  std::int64_t inlinks_from_ccc = 0;
  std::int64_t outlinks_to_ccc = 0;
  std::int64_t inlinks_from_abroad = 0;
  std::int64_t outlinks_to_abroad = 0;
  double percent_inlinks_from_ccc = 0.0;
  double percent_outlinks_to_ccc = 0.0;
  double percent_inlinks_from_abroad = 0.0;
  double percent_outlinks_to_abroad = 0.0;
};

LinkCounts link_qualification(const WikiSnapshot& snapshot, PageId page,
                              const std::set<PageId>& reliable_pages,
                              const std::set<PageId>& abroad_geo_pages);

// Derives class_label and num_retrieval_strategies from the evidence already
// present on the record.
void assemble(QualificationRecord& record);

struct QualifyConfig {
  int workers = 1;
  int crawl_depth_cap = 15;
  int closure_rounds = 10;
  int reliable_passes = 1;  // created_by/part_of evaluation rounds
};

// Runs the full three-phase qualification over every page; records are
// returned sorted by page_id and are independent of worker count.
std::vector<QualificationRecord> qualify_all(const WikiSnapshot& snapshot,
                                             const LanguageAtlas& atlas,
                                             const BoundarySet& boundaries,
                                             const PropertyCatalog& catalog,
                                             const QualifyConfig& config = {});

nlohmann::json record_to_json(const QualificationRecord& record);
QualificationRecord record_from_json(const nlohmann::json& j);

void save_records(const std::vector<QualificationRecord>& records,
                  const std::filesystem::path& path);
std::vector<QualificationRecord> load_records(const std::filesystem::path& path);

}  // namespace ccc
