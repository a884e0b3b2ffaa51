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

#include "ccc/features.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <thread>

#include "ccc/jsonl.hpp"
#include "ccc/text.hpp"

namespace ccc {

namespace {

constexpr const char* kGroupNames[kPropertyGroupCount] = {
    "country",       "location",    "language_strong", "created_by",
    "part_of",       "language_weak", "affiliation",   "has_part",
};

// Runs fn(0..n) across workers; slots must be independent. The first
// exception wins and is rethrown on the caller thread.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int count = std::min<int>(workers, static_cast<int>(n));
  pool.reserve(count);
  for (int w = 0; w < count; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

const char* group_name(PropertyGroup g) { return kGroupNames[static_cast<int>(g)]; }

PropertyCatalog PropertyCatalog::defaults() {
  PropertyCatalog c;
  c.groups_[static_cast<int>(PropertyGroup::Country)] = {"P17", "P27", "P495", "P1532"};
  c.groups_[static_cast<int>(PropertyGroup::Location)] = {
      "P276", "P131", "P1376", "P669",  "P2825", "P609", "P1001", "P3842", "P3018",
      "P115", "P485", "P291",  "P840",  "P1444", "P1071", "P740", "P159",  "P2541"};
  c.groups_[static_cast<int>(PropertyGroup::LanguageStrong)] = {"P37", "P364", "P103"};
  c.groups_[static_cast<int>(PropertyGroup::CreatedBy)] = {"P19",  "P112", "P170", "P84", "P50",
                                                           "P178", "P943", "P676", "P86"};
  c.groups_[static_cast<int>(PropertyGroup::PartOf)] = {"P361"};
  c.groups_[static_cast<int>(PropertyGroup::LanguageWeak)] = {"P407", "P1412", "P2936"};
  c.groups_[static_cast<int>(PropertyGroup::Affiliation)] = {
      "P463", "P102", "P54", "P69", "P108", "P39", "P937", "P1027", "P166", "P118",
      "P611", "P1416", "P551"};
  c.groups_[static_cast<int>(PropertyGroup::HasPart)] = {"P527", "P150"};
  c.index();
  return c;
}

PropertyCatalog PropertyCatalog::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ValidationError(path.string() + ": expected a JSON object");

  PropertyCatalog c = defaults();
  for (const auto& [key, value] : j.items()) {
    int group = -1;
    for (int g = 0; g < kPropertyGroupCount; ++g) {
      if (key == kGroupNames[g]) group = g;
    }
    if (group < 0) throw ValidationError(path.string() + ": unknown group \"" + key + "\"");
    if (!value.is_array()) throw ValidationError(path.string() + ": group " + key + " must be an array");
    std::vector<PropertyId> props;
    for (const auto& p : value) {
      if (!p.is_string() || !is_property_id(p.get<std::string>())) {
        throw ValidationError(path.string() + ": malformed property in group " + key);
      }
      props.push_back(p.get<std::string>());
    }
    c.groups_[group] = std::move(props);
  }
  c.index();
  return c;
}

void PropertyCatalog::index() {
  by_property_.clear();
  for (int g = 0; g < kPropertyGroupCount; ++g) {
    for (const auto& p : groups_[g]) {
      auto [it, inserted] = by_property_.emplace(p, static_cast<PropertyGroup>(g));
      if (!inserted) {
        throw ValidationError("property " + p + " appears in groups " +
                              kGroupNames[static_cast<int>(it->second)] + " and " + kGroupNames[g]);
      }
    }
  }
}

const std::vector<PropertyId>& PropertyCatalog::group(PropertyGroup g) const {
  return groups_[static_cast<int>(g)];
}

std::optional<PropertyGroup> PropertyCatalog::group_of(const PropertyId& property) const {
  auto it = by_property_.find(property);
  if (it == by_property_.end()) return std::nullopt;
  return it->second;
}

const std::set<QItem>& LocationClosure::roots_of(const QItem& q) const {
  static const std::set<QItem> kEmpty;
  auto it = roots.find(q);
  return it == roots.end() ? kEmpty : it->second;
}

LocationClosure build_location_closure(const WikiSnapshot& snapshot, const std::set<QItem>& seeds,
                                       const PropertyCatalog& catalog, int max_rounds) {
  LocationClosure closure;
  for (const auto& q : seeds) {
    closure.depth[q] = 0;
    closure.roots[q] = {q};
  }
  const auto& props = catalog.group(PropertyGroup::Location);

  // Wikidata entities whose qitem already sits in the closure contribute
  // nothing new; scan the rest each round against the frozen previous round.
  for (int round = 1; round <= max_rounds; ++round) {
    std::map<QItem, std::set<QItem>> added;
    for (const auto& [qitem, entity] : snapshot.wikidata_entities()) {
      if (closure.contains(qitem)) continue;
      std::set<QItem> reached;
      for (const auto& prop : props) {
        auto it = entity.claims.find(prop);
        if (it == entity.claims.end()) continue;
        for (const auto& value : it->second) {
          if (!closure.contains(value)) continue;
          const auto& r = closure.roots_of(value);
          reached.insert(r.begin(), r.end());
        }
      }
      if (!reached.empty()) added.emplace(qitem, std::move(reached));
    }
    if (added.empty()) break;
    for (auto& [qitem, roots] : added) {
      closure.depth[qitem] = round;
      closure.roots[qitem] = std::move(roots);
    }
  }
  return closure;
}

std::map<PageId, CrawlResult> category_crawl(const WikiSnapshot& snapshot, const Lexicon& lexicon,
                                             int depth_cap) {
  std::map<std::int64_t, int> dist;
  std::map<std::int64_t, std::int64_t> npaths;
  std::map<std::int64_t, std::set<QItem>> owners;

  std::set<std::int64_t> frontier;
  for (const auto& [cat_id, cat] : snapshot.categories()) {
    auto match = lexicon.match_title(cat.title);
    if (!match) continue;
    dist[cat_id] = 0;
    npaths[cat_id] = 1;
    auto& set = owners[cat_id];
    for (const auto& owner : match->owners) set.insert(owner.qitem);
    frontier.insert(cat_id);
  }

  // Level-by-level descent: path counts and owner sets for depth d+1 only
  // read finalized depth-d values, so iteration order cannot matter.
  for (int d = 0; d < depth_cap && !frontier.empty(); ++d) {
    std::set<std::int64_t> next_frontier;
    for (std::int64_t cat : frontier) {
      for (std::int64_t child : snapshot.subcategories(cat)) {
        auto it = dist.find(child);
        if (it == dist.end()) {
          dist[child] = d + 1;
          npaths[child] = npaths[cat];
          owners[child] = owners[cat];
          next_frontier.insert(child);
        } else if (it->second == d + 1) {
          npaths[child] += npaths[cat];
          owners[child].insert(owners[cat].begin(), owners[cat].end());
        }
      }
    }
    frontier = std::move(next_frontier);
  }

  std::map<PageId, CrawlResult> results;
  for (const auto& [cat_id, d] : dist) {
    for (PageId page : snapshot.members(cat_id)) {
      auto& r = results[page];
      if (r.level == -1 || d + 1 < r.level) {
        r.level = d + 1;
        r.num_paths = npaths[cat_id];
        r.territories.assign(owners[cat_id].begin(), owners[cat_id].end());
      } else if (d + 1 == r.level) {
        r.num_paths += npaths[cat_id];
        std::set<QItem> merged(r.territories.begin(), r.territories.end());
        merged.insert(owners[cat_id].begin(), owners[cat_id].end());
        r.territories.assign(merged.begin(), merged.end());
      }
    }
  }
  for (auto& [page, r] : results) {
    std::sort(r.territories.begin(), r.territories.end(),
              [](const QItem& a, const QItem& b) { return id_less(a, b); });
  }
  return results;
}

bool evidence_less(const EvidencePair& a, const EvidencePair& b) {
  if (a.property != b.property) return id_less(a.property, b.property);
  return id_less(a.value, b.value);
}

std::string to_string(QualLabel label) {
  switch (label) {
    case QualLabel::ReliablyCCC: return "reliably_ccc";
    case QualLabel::PotentiallyCCC: return "potentially_ccc";
    case QualLabel::ReliablyNonCCC: return "reliably_non_ccc";
    case QualLabel::PotentiallyNonCCC: return "potentially_non_ccc";
    case QualLabel::Unqualified: return "unqualified";
  }
  return "unqualified";
}

QualLabel qual_label_from_string(const std::string& s) {
  if (s == "reliably_ccc") return QualLabel::ReliablyCCC;
  if (s == "potentially_ccc") return QualLabel::PotentiallyCCC;
  if (s == "reliably_non_ccc") return QualLabel::ReliablyNonCCC;
  if (s == "potentially_non_ccc") return QualLabel::PotentiallyNonCCC;
  if (s == "unqualified") return QualLabel::Unqualified;
  throw ValidationError("unknown class label \"" + s + "\"");
}

GeoVerdict qualify_geolocated(const WikiSnapshot& snapshot, const LanguageAtlas& atlas,
                              const BoundarySet& boundaries, PageId page) {
  auto tag = snapshot.geotag(page);
  if (!tag) return {};
  auto territory = reverse_geocode(tag->first, tag->second, boundaries);
  if (!territory) return {};
  bool home = atlas.languages_of(*territory).count(snapshot.language()) > 0;
  return {home ? 1 : -1, *territory};
}

std::vector<EvidencePair> match_claims(const WikidataEntity& entity,
                                       const std::vector<PropertyId>& properties,
                                       const std::function<bool(const QItem&)>& accept) {
  std::vector<EvidencePair> out;
  for (const auto& prop : properties) {
    auto it = entity.claims.find(prop);
    if (it == entity.claims.end()) continue;
    for (const auto& value : it->second) {
      if (accept(value)) out.push_back({prop, value});
    }
  }
  std::sort(out.begin(), out.end(), evidence_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

LinkCounts link_qualification(const WikiSnapshot& snapshot, PageId page,
                              const std::set<PageId>& reliable_pages,
                              const std::set<PageId>& abroad_geo_pages) {
  LinkCounts counts;
  const auto& in = snapshot.inlinks(page);
  const auto& out = snapshot.outlinks(page);
  for (PageId p : in) {
    if (reliable_pages.count(p)) ++counts.inlinks_from_ccc;
    if (abroad_geo_pages.count(p)) ++counts.inlinks_from_abroad;
  }
  for (PageId p : out) {
    if (reliable_pages.count(p)) ++counts.outlinks_to_ccc;
    if (abroad_geo_pages.count(p)) ++counts.outlinks_to_abroad;
  }
  if (!in.empty()) {
    counts.percent_inlinks_from_ccc = static_cast<double>(counts.inlinks_from_ccc) / in.size();
    counts.percent_inlinks_from_abroad =
        static_cast<double>(counts.inlinks_from_abroad) / in.size();
  }
  if (!out.empty()) {
    counts.percent_outlinks_to_ccc = static_cast<double>(counts.outlinks_to_ccc) / out.size();
    counts.percent_outlinks_to_abroad =
        static_cast<double>(counts.outlinks_to_abroad) / out.size();
  }
  return counts;
}

namespace {

bool has_reliable_ccc(const QualificationRecord& r) {
  return r.ccc_geolocated == 1 || !r.keyword_title.empty() ||
         !r.group_evidence(PropertyGroup::Country).empty() ||
         !r.group_evidence(PropertyGroup::Location).empty() ||
         !r.group_evidence(PropertyGroup::LanguageStrong).empty() ||
         !r.group_evidence(PropertyGroup::CreatedBy).empty() ||
         !r.group_evidence(PropertyGroup::PartOf).empty();
}

bool has_reliable_non(const QualificationRecord& r) {
  return r.ccc_geolocated == -1 || !r.group_other(PropertyGroup::Country).empty() ||
         !r.group_other(PropertyGroup::Location).empty();
}

bool has_potential_ccc(const QualificationRecord& r) {
  return r.crawl.level != -1 || !r.group_evidence(PropertyGroup::LanguageWeak).empty() ||
         !r.group_evidence(PropertyGroup::Affiliation).empty() ||
         !r.group_evidence(PropertyGroup::HasPart).empty() || r.inlinks_from_ccc > 0 ||
         r.outlinks_to_ccc > 0;
}

bool has_potential_non(const QualificationRecord& r) {
  return !r.group_other(PropertyGroup::LanguageStrong).empty() ||
         !r.group_other(PropertyGroup::CreatedBy).empty() ||
         !r.group_other(PropertyGroup::PartOf).empty() ||
         !r.group_other(PropertyGroup::LanguageWeak).empty() ||
         !r.group_other(PropertyGroup::Affiliation).empty() ||
         !r.group_other(PropertyGroup::HasPart).empty() || r.inlinks_from_abroad > 0 ||
         r.outlinks_to_abroad > 0;
}

}  // namespace

void assemble(QualificationRecord& r) {
  bool reliable = has_reliable_ccc(r);
  bool reliable_non = has_reliable_non(r);
  if (reliable && reliable_non) {
    r.class_label = QualLabel::ReliablyNonCCC;
  } else if (reliable) {
    r.class_label = QualLabel::ReliablyCCC;
  } else if (reliable_non) {
    r.class_label = QualLabel::ReliablyNonCCC;
  } else if (has_potential_ccc(r)) {
    r.class_label = QualLabel::PotentiallyCCC;
  } else if (has_potential_non(r)) {
    r.class_label = QualLabel::PotentiallyNonCCC;
  } else {
    r.class_label = QualLabel::Unqualified;
  }

  int n = 0;
  n += r.ccc_geolocated == 1;
  n += !r.keyword_title.empty();
  n += r.crawl.level != -1;
  n += !r.group_evidence(PropertyGroup::Country).empty();
  n += !r.group_evidence(PropertyGroup::Location).empty();
  n += !r.group_evidence(PropertyGroup::LanguageStrong).empty();
  n += !r.group_evidence(PropertyGroup::CreatedBy).empty();
  n += !r.group_evidence(PropertyGroup::PartOf).empty();
  n += !r.group_evidence(PropertyGroup::LanguageWeak).empty();
  n += !r.group_evidence(PropertyGroup::Affiliation).empty();
  n += !r.group_evidence(PropertyGroup::HasPart).empty();
  n += r.inlinks_from_ccc > 0;
  n += r.outlinks_to_ccc > 0;
  r.num_retrieval_strategies = n;
}

namespace {

// ISO codes for a territory, preferring the snapshot language's atlas row.
std::pair<std::string, std::string> iso_codes(const LanguageAtlas& atlas,
                                              const std::string& language, const QItem& qitem) {
  if (const Territory* t = atlas.find_territory(language, qitem)) {
    return {t->iso3166, t->iso31662};
  }
  for (const auto& other : atlas.languages_of(qitem)) {
    if (const Territory* t = atlas.find_territory(other, qitem)) {
      return {t->iso3166, t->iso31662};
    }
  }
  return {};
}

}  // namespace

std::vector<QualificationRecord> qualify_all(const WikiSnapshot& snapshot,
                                             const LanguageAtlas& atlas,
                                             const BoundarySet& boundaries,
                                             const PropertyCatalog& catalog,
                                             const QualifyConfig& config) {
  const std::string& language = snapshot.language();
  if (!atlas.has_language(language)) {
    throw ValidationError("unknown language code \"" + language + "\"");
  }

  const Lexicon lexicon = Lexicon::for_language(atlas, language);
  const std::set<QItem> home_territories = atlas.territory_qitems(language);
  const std::set<QItem> abroad = atlas.abroad_territories(language);

  std::set<QItem> language_qitems;
  for (const auto& q : atlas.language_qitems(language)) language_qitems.insert(q);
  std::set<QItem> other_language_qitems;
  for (const auto& other : atlas.languages()) {
    if (other == language) continue;
    for (const auto& q : atlas.language_qitems(other)) {
      if (!language_qitems.count(q)) other_language_qitems.insert(q);
    }
  }

  const LocationClosure home_closure =
      build_location_closure(snapshot, home_territories, catalog, config.closure_rounds);
  const LocationClosure abroad_closure =
      build_location_closure(snapshot, abroad, catalog, config.closure_rounds);
  const std::map<PageId, CrawlResult> crawl =
      category_crawl(snapshot, lexicon, config.crawl_depth_cap);

  std::vector<QualificationRecord> records(snapshot.pages().size());
  std::vector<const PageRecord*> pages;
  pages.reserve(records.size());
  for (const auto& [id, page] : snapshot.pages()) pages.push_back(&page);

  auto in_set = [](const std::set<QItem>& s) {
    return [&s](const QItem& q) { return s.count(q) > 0; };
  };

  // Phase 1: territory-anchored evidence (geolocation, title keywords,
  // category crawl, country/location/language_strong groups and mirrors).
  parallel_for(records.size(), config.workers, [&](std::size_t i) {
    const PageRecord& page = *pages[i];
    QualificationRecord& r = records[i];
    r.page_id = page.page_id;
    r.qitem = page.qitem;
    r.page_title = page.title;
    r.date_created = page.date_created;

    if (auto tag = snapshot.geotag(page.page_id)) {
      r.has_geotag = true;
      r.lat = tag->first;
      r.lon = tag->second;
    }
    GeoVerdict geo = qualify_geolocated(snapshot, atlas, boundaries, page.page_id);
    r.ccc_geolocated = geo.verdict;
    r.geo_territory = geo.territory;
    if (geo.verdict != 0) {
      std::tie(r.iso3166, r.iso31662) = iso_codes(atlas, language, geo.territory);
    }

    if (auto match = lexicon.match_title(page.title)) {
      r.keyword_title = match->keyword;
      r.keyword_owners = match->owners;
    }

    if (auto it = crawl.find(page.page_id); it != crawl.end()) r.crawl = it->second;

    const WikidataEntity* entity = page.qitem.empty() ? nullptr : snapshot.entity(page.qitem);
    if (entity) {
      auto& ev = r.evidence;
      auto& other = r.other_evidence;
      ev[static_cast<int>(PropertyGroup::Country)] =
          match_claims(*entity, catalog.group(PropertyGroup::Country), in_set(home_territories));
      other[static_cast<int>(PropertyGroup::Country)] =
          match_claims(*entity, catalog.group(PropertyGroup::Country), in_set(abroad));
      ev[static_cast<int>(PropertyGroup::Location)] =
          match_claims(*entity, catalog.group(PropertyGroup::Location),
                       [&](const QItem& q) { return home_closure.contains(q); });
      other[static_cast<int>(PropertyGroup::Location)] =
          match_claims(*entity, catalog.group(PropertyGroup::Location),
                       [&](const QItem& q) { return abroad_closure.contains(q); });
      ev[static_cast<int>(PropertyGroup::LanguageStrong)] = match_claims(
          *entity, catalog.group(PropertyGroup::LanguageStrong), in_set(language_qitems));
      other[static_cast<int>(PropertyGroup::LanguageStrong)] = match_claims(
          *entity, catalog.group(PropertyGroup::LanguageStrong), in_set(other_language_qitems));

      for (const auto& pair : r.group_evidence(PropertyGroup::Location)) {
        std::set<QItem> batch;
        if (home_territories.count(pair.value)) batch.insert(pair.value);
        for (const auto& root : home_closure.roots_of(pair.value)) {
          if (home_territories.count(root)) batch.insert(root);
        }
        r.location_root_qitems.insert(r.location_root_qitems.end(), batch.begin(), batch.end());
      }
    }
  });

  // Seal the phase-1 reliable and abroad sets.
  std::set<PageId> reliable_pages;
  std::set<QItem> reliable_qitems;
  std::set<QItem> abroad_qitems;
  std::set<PageId> abroad_geo_pages;
  for (const auto& r : records) {
    bool non = has_reliable_non(r);
    if (non) {
      if (!r.qitem.empty()) abroad_qitems.insert(r.qitem);
    } else if (has_reliable_ccc(r)) {
      reliable_pages.insert(r.page_id);
      if (!r.qitem.empty()) reliable_qitems.insert(r.qitem);
    }
    if (r.ccc_geolocated == -1) abroad_geo_pages.insert(r.page_id);
  }

  // Phase 2: created_by/part_of against the sealed reliable set; each extra
  // pass re-evaluates against the grown set.
  for (int pass = 0; pass < std::max(1, config.reliable_passes); ++pass) {
    parallel_for(records.size(), config.workers, [&](std::size_t i) {
      QualificationRecord& r = records[i];
      const WikidataEntity* entity = r.qitem.empty() ? nullptr : snapshot.entity(r.qitem);
      if (!entity) return;
      for (PropertyGroup g : {PropertyGroup::CreatedBy, PropertyGroup::PartOf}) {
        r.evidence[static_cast<int>(g)] =
            match_claims(*entity, catalog.group(g), in_set(reliable_qitems));
        r.other_evidence[static_cast<int>(g)] =
            match_claims(*entity, catalog.group(g), in_set(abroad_qitems));
      }
    });
    bool grew = false;
    for (const auto& r : records) {
      if (reliable_pages.count(r.page_id) || has_reliable_non(r)) continue;
      if (r.group_evidence(PropertyGroup::CreatedBy).empty() &&
          r.group_evidence(PropertyGroup::PartOf).empty()) {
        continue;
      }
      grew = true;
      reliable_pages.insert(r.page_id);
      if (!r.qitem.empty()) reliable_qitems.insert(r.qitem);
    }
    if (!grew) break;
  }

  // Phase 3: potential evidence, link features, final labels.
  parallel_for(records.size(), config.workers, [&](std::size_t i) {
    QualificationRecord& r = records[i];
    const WikidataEntity* entity = r.qitem.empty() ? nullptr : snapshot.entity(r.qitem);
    if (entity) {
      r.evidence[static_cast<int>(PropertyGroup::LanguageWeak)] = match_claims(
          *entity, catalog.group(PropertyGroup::LanguageWeak), in_set(language_qitems));
      r.other_evidence[static_cast<int>(PropertyGroup::LanguageWeak)] = match_claims(
          *entity, catalog.group(PropertyGroup::LanguageWeak), in_set(other_language_qitems));
      for (PropertyGroup g : {PropertyGroup::Affiliation, PropertyGroup::HasPart}) {
        r.evidence[static_cast<int>(g)] =
            match_claims(*entity, catalog.group(g), in_set(reliable_qitems));
        r.other_evidence[static_cast<int>(g)] =
            match_claims(*entity, catalog.group(g), in_set(abroad_qitems));
      }
    }

    LinkCounts links = link_qualification(snapshot, r.page_id, reliable_pages, abroad_geo_pages);
    r.inlinks_from_ccc = links.inlinks_from_ccc;
    r.outlinks_to_ccc = links.outlinks_to_ccc;
    r.inlinks_from_abroad = links.inlinks_from_abroad;
    r.outlinks_to_abroad = links.outlinks_to_abroad;
    r.percent_inlinks_from_ccc = links.percent_inlinks_from_ccc;
    r.percent_outlinks_to_ccc = links.percent_outlinks_to_ccc;
    r.percent_inlinks_from_abroad = links.percent_inlinks_from_abroad;
    r.percent_outlinks_to_abroad = links.percent_outlinks_to_abroad;

    assemble(r);
  });

  return records;
}

namespace {

std::string pair_to_string(const EvidencePair& p) { return p.property + ":" + p.value; }

EvidencePair pair_from_string(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw ValidationError("malformed evidence pair \"" + s + "\"");
  EvidencePair p{s.substr(0, colon), s.substr(colon + 1)};
  if (!is_property_id(p.property) || !is_qitem(p.value)) {
    throw ValidationError("malformed evidence pair \"" + s + "\"");
  }
  return p;
}

nlohmann::json pairs_to_json(const std::vector<EvidencePair>& pairs) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : pairs) out.push_back(pair_to_string(p));
  return out;
}

std::vector<EvidencePair> pairs_from_json(const nlohmann::json& j) {
  std::vector<EvidencePair> out;
  for (const auto& s : j) out.push_back(pair_from_string(s.get<std::string>()));
  return out;
}

}  // namespace

nlohmann::json record_to_json(const QualificationRecord& r) {
  nlohmann::json j;
  j["page_id"] = r.page_id;
  j["qitem"] = r.qitem;
  j["page_title"] = r.page_title;
  j["date_created"] = r.date_created;
  if (r.has_geotag) {
    j["geotag"] = {r.lat, r.lon};
  } else {
    j["geotag"] = nullptr;
  }
  j["ccc_geolocated"] = r.ccc_geolocated;
  j["geo_territory"] = r.geo_territory;
  j["iso3166"] = r.iso3166;
  j["iso31662"] = r.iso31662;
  j["keyword_title"] = r.keyword_title;
  nlohmann::json owners = nlohmann::json::array();
  for (const auto& o : r.keyword_owners) {
    owners.push_back({{"qitem", o.qitem}, {"is_language", o.is_language}});
  }
  j["keyword_owners"] = owners;
  j["category_level"] = r.crawl.level;
  j["num_category_paths"] = r.crawl.num_paths;
  j["category_territories"] = r.crawl.territories;
  nlohmann::json evidence, other;
  for (int g = 0; g < kPropertyGroupCount; ++g) {
    evidence[kGroupNames[g]] = pairs_to_json(r.evidence[g]);
    other[kGroupNames[g]] = pairs_to_json(r.other_evidence[g]);
  }
  j["evidence"] = evidence;
  j["other_evidence"] = other;
  j["location_root_qitems"] = r.location_root_qitems;
  j["inlinks_from_ccc"] = r.inlinks_from_ccc;
  j["outlinks_to_ccc"] = r.outlinks_to_ccc;
  j["inlinks_from_abroad"] = r.inlinks_from_abroad;
  j["outlinks_to_abroad"] = r.outlinks_to_abroad;
  j["percent_inlinks_from_ccc"] = r.percent_inlinks_from_ccc;
  j["percent_outlinks_to_ccc"] = r.percent_outlinks_to_ccc;
  j["percent_inlinks_from_abroad"] = r.percent_inlinks_from_abroad;
  j["percent_outlinks_to_abroad"] = r.percent_outlinks_to_abroad;
  j["num_retrieval_strategies"] = r.num_retrieval_strategies;
  j["class_label"] = to_string(r.class_label);
  j["ccc_binary"] = r.ccc_binary;
  j["main_territory"] = r.main_territory;
  j["attribution_rule"] = r.attribution_rule;
  return j;
}

QualificationRecord record_from_json(const nlohmann::json& j) {
  QualificationRecord r;
  r.page_id = json_int(j, "page_id");
  r.qitem = json_string(j, "qitem");
  r.page_title = json_string(j, "page_title");
  r.date_created = json_int(j, "date_created");
  if (j.contains("geotag") && !j["geotag"].is_null()) {
    r.has_geotag = true;
    r.lat = j["geotag"][0].get<double>();
    r.lon = j["geotag"][1].get<double>();
  }
  r.ccc_geolocated = static_cast<int>(json_int(j, "ccc_geolocated"));
  r.geo_territory = json_string(j, "geo_territory");
  r.iso3166 = json_string(j, "iso3166");
  r.iso31662 = json_string(j, "iso31662");
  r.keyword_title = json_string(j, "keyword_title");
  for (const auto& o : j.at("keyword_owners")) {
    r.keyword_owners.push_back({o.at("qitem").get<std::string>(), o.at("is_language").get<bool>()});
  }
  r.crawl.level = static_cast<int>(json_int(j, "category_level"));
  r.crawl.num_paths = json_int(j, "num_category_paths");
  r.crawl.territories = j.at("category_territories").get<std::vector<QItem>>();
  for (int g = 0; g < kPropertyGroupCount; ++g) {
    r.evidence[g] = pairs_from_json(j.at("evidence").at(kGroupNames[g]));
    r.other_evidence[g] = pairs_from_json(j.at("other_evidence").at(kGroupNames[g]));
  }
  r.location_root_qitems = j.at("location_root_qitems").get<std::vector<QItem>>();
  r.inlinks_from_ccc = json_int(j, "inlinks_from_ccc");
  r.outlinks_to_ccc = json_int(j, "outlinks_to_ccc");
  r.inlinks_from_abroad = json_int(j, "inlinks_from_abroad");
  r.outlinks_to_abroad = json_int(j, "outlinks_to_abroad");
  r.percent_inlinks_from_ccc = json_double(j, "percent_inlinks_from_ccc");
  r.percent_outlinks_to_ccc = json_double(j, "percent_outlinks_to_ccc");
  r.percent_inlinks_from_abroad = json_double(j, "percent_inlinks_from_abroad");
  r.percent_outlinks_to_abroad = json_double(j, "percent_outlinks_to_abroad");
  r.num_retrieval_strategies = static_cast<int>(json_int(j, "num_retrieval_strategies"));
  r.class_label = qual_label_from_string(json_string(j, "class_label"));
  r.ccc_binary = static_cast<int>(json_int(j, "ccc_binary"));
  r.main_territory = json_string(j, "main_territory");
  r.attribution_rule = json_string(j, "attribution_rule");
  return r;
}

void save_records(const std::vector<QualificationRecord>& records,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  for (const auto& r : records) {
    out << record_to_json(r).dump() << '\n';
  }
  if (!out) throw ValidationError("write failed for " + path.string());
}

std::vector<QualificationRecord> load_records(const std::filesystem::path& path) {
  std::vector<QualificationRecord> records;
  for_each_jsonl(path, [&](const nlohmann::json& j) { records.push_back(record_from_json(j)); });
  return records;
}

}  // namespace ccc
