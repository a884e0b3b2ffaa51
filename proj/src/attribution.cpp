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

#include "ccc/attribution.hpp"

#include <algorithm>
#include <optional>

namespace ccc {

namespace {

// Strictly most frequent key, or nullopt on a tie / empty counts.
std::optional<QItem> strict_majority(const std::map<QItem, int>& counts) {
  const QItem* best = nullptr;
  int best_count = 0;
  bool tied = false;
  for (const auto& [qitem, count] : counts) {
    if (count > best_count) {
      best = &qitem;
      best_count = count;
      tied = false;
    } else if (count == best_count) {
      tied = true;
    }
  }
  if (!best || tied) return std::nullopt;
  return *best;
}

}  // namespace

AttributionResult attribute_main_territory(std::vector<QualificationRecord>& records,
                                           const LanguageAtlas& atlas,
                                           const std::string& language, int max_rounds) {
  const std::set<QItem> home = atlas.territory_qitems(language);

  std::vector<QualificationRecord*> ccc;
  std::map<QItem, QualificationRecord*> by_qitem;
  for (auto& r : records) {
    r.main_territory.clear();
    r.attribution_rule.clear();
    if (r.ccc_binary == 1) {
      ccc.push_back(&r);
      if (!r.qitem.empty()) by_qitem.emplace(r.qitem, &r);
    }
  }

  std::vector<QualificationRecord*> unresolved;
  for (QualificationRecord* r : ccc) {
    if (r->ccc_geolocated == 1 && home.count(r->geo_territory)) {
      r->main_territory = r->geo_territory;
      r->attribution_rule = "geo";
      continue;
    }

    if (!r->keyword_title.empty()) {
      bool names_language = false;
      std::set<QItem> territory_owners;
      for (const auto& owner : r->keyword_owners) {
        if (owner.is_language) {
          names_language = true;
        } else {
          territory_owners.insert(owner.qitem);
        }
      }
      if (!names_language && territory_owners.size() == 1 &&
          home.count(*territory_owners.begin())) {
        r->main_territory = *territory_owners.begin();
        r->attribution_rule = "keyword";
        continue;
      }
    }

    std::map<QItem, int> counts;
    for (const auto& q : r->crawl.territories) {
      if (home.count(q)) counts[q]++;
    }
    for (const auto& pair : r->group_evidence(PropertyGroup::Country)) {
      if (home.count(pair.value)) counts[pair.value]++;
    }
    for (const auto& q : r->location_root_qitems) {
      counts[q]++;  // already filtered to home territories upstream
    }
    if (!counts.empty()) {
      if (auto winner = strict_majority(counts)) {
        r->main_territory = *winner;
        r->attribution_rule = "majority";
      } else {
        r->main_territory = kUnassigned;
        r->attribution_rule = "unassigned";
      }
      continue;
    }

    unresolved.push_back(r);
  }

  // Propagation: each round votes against the frozen previous-round
  // assignments; a strict majority assigns, a tie waits for more neighbors.
  for (int round = 0; round < max_rounds && !unresolved.empty(); ++round) {
    std::vector<std::pair<QualificationRecord*, QItem>> assignments;
    for (QualificationRecord* r : unresolved) {
      std::map<QItem, int> counts;
      for (PropertyGroup g : {PropertyGroup::PartOf, PropertyGroup::HasPart,
                              PropertyGroup::CreatedBy, PropertyGroup::Affiliation}) {
        for (const auto& pair : r->group_evidence(g)) {
          auto it = by_qitem.find(pair.value);
          if (it == by_qitem.end()) continue;
          const std::string& assigned = it->second->main_territory;
          if (assigned.empty() || assigned == kUnassigned) continue;
          counts[assigned]++;
        }
      }
      if (auto winner = strict_majority(counts)) assignments.emplace_back(r, *winner);
    }
    if (assignments.empty()) break;
    for (auto& [r, territory] : assignments) {
      r->main_territory = territory;
      r->attribution_rule = "propagated";
    }
    std::erase_if(unresolved, [](QualificationRecord* r) { return !r->main_territory.empty(); });
  }
  for (QualificationRecord* r : unresolved) {
    r->main_territory = kUnassigned;
    r->attribution_rule = "unassigned";
  }

  AttributionResult result;
  for (QualificationRecord* r : ccc) {
    result.main_territory[r->page_id] = r->main_territory;
    result.rule[r->page_id] = r->attribution_rule;
  }
  return result;
}

std::map<std::string, double> territory_distribution(
    const std::vector<QualificationRecord>& records) {
  std::map<std::string, std::int64_t> counts;
  std::int64_t total = 0;
  for (const auto& r : records) {
    if (r.ccc_binary != 1) continue;
    ++total;
    counts[r.main_territory.empty() ? kUnassigned : r.main_territory]++;
  }
  std::map<std::string, double> shares;
  for (const auto& [territory, count] : counts) {
    shares[territory] = static_cast<double>(count) / total;
  }
  return shares;
}

}  // namespace ccc
