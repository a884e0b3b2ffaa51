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

#include "ccc/atlas.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include "ccc/csv.hpp"
#include "ccc/jsonl.hpp"
#include "ccc/text.hpp"

namespace ccc {

namespace {

bool valid_iso3166(const std::string& s) {
  if (s.size() != 2) return false;
  return std::isupper(static_cast<unsigned char>(s[0])) &&
         std::isupper(static_cast<unsigned char>(s[1]));
}

bool valid_iso31662(const std::string& s, const std::string& country) {
  if (s.size() < 4 || s.size() > 6) return false;  // XX-Y .. XX-YYY
  if (s.compare(0, 2, country) != 0 || s[2] != '-') return false;
  for (std::size_t i = 3; i < s.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (!std::isupper(c) && !std::isdigit(c)) return false;
  }
  return true;
}

std::vector<std::string> parse_keywords(const std::string& cell) {
  std::vector<std::string> out;
  for (const auto& part : split(cell, ';')) {
    std::string k = fold_case(trim(part));
    if (!k.empty()) out.push_back(std::move(k));
  }
  return out;
}

[[noreturn]] void fail_at(const std::filesystem::path& path, std::size_t line, const std::string& msg) {
  throw ValidationError(path.string() + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

LanguageAtlas LanguageAtlas::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());

  csv::Reader reader(in);
  std::vector<std::string> row;
  if (!reader.next(row)) throw ValidationError(path.string() + ": no territories loaded");

  const std::vector<std::string> base = {"language", "qitem", "iso3166", "iso31662", "keywords"};
  bool extended = false;
  if (row.size() == 7 && row[5] == "language_qitems" && row[6] == "language_keywords") {
    extended = true;
  } else if (row.size() != 5) {
    fail_at(path, reader.line(), "bad atlas header");
  }
  for (std::size_t i = 0; i < 5; ++i) {
    if (row[i] != base[i]) fail_at(path, reader.line(), "bad atlas header");
  }

  LanguageAtlas atlas;
  std::set<std::pair<std::string, QItem>> seen;
  while (reader.next(row)) {
    const std::size_t line = reader.line();
    if (row.size() != (extended ? 7u : 5u)) fail_at(path, line, "wrong column count");

    Territory t;
    const std::string language = trim(row[0]);
    t.qitem = trim(row[1]);
    t.iso3166 = trim(row[2]);
    t.iso31662 = trim(row[3]);
    t.keywords = parse_keywords(row[4]);

    if (language.empty()) fail_at(path, line, "empty language code");
    if (!is_qitem(t.qitem)) fail_at(path, line, "malformed qitem \"" + t.qitem + "\"");
    if (!valid_iso3166(t.iso3166)) fail_at(path, line, "malformed ISO code \"" + t.iso3166 + "\"");
    if (!t.iso31662.empty() && !valid_iso31662(t.iso31662, t.iso3166)) {
      fail_at(path, line, "malformed ISO code \"" + t.iso31662 + "\"");
    }
    t.level = t.iso31662.empty() ? 1 : 2;
    if (t.keywords.empty()) fail_at(path, line, "empty keyword list");
    if (!seen.insert({language, t.qitem}).second) {
      fail_at(path, line, "duplicate row for " + language + "/" + t.qitem);
    }

    auto& entry = atlas.by_language_[language];
    if (extended) {
      std::vector<QItem> lq;
      for (const auto& part : split(row[5], ';')) {
        std::string q = trim(part);
        if (q.empty()) continue;
        if (!is_qitem(q)) fail_at(path, line, "malformed qitem \"" + q + "\"");
        lq.push_back(std::move(q));
      }
      if (!lq.empty()) {
        if (entry.language_qitems.empty()) {
          entry.language_qitems = lq;
        } else if (entry.language_qitems != lq) {
          fail_at(path, line, "inconsistent language_qitems for " + language);
        }
      }
      std::vector<std::string> lk = parse_keywords(row[6]);
      if (!lk.empty()) {
        if (entry.language_keywords.empty()) {
          entry.language_keywords = lk;
        } else if (entry.language_keywords != lk) {
          fail_at(path, line, "inconsistent language_keywords for " + language);
        }
      }
    }

    atlas.by_qitem_[t.qitem].insert(language);
    auto [it, inserted] = atlas.level_by_qitem_.try_emplace(t.qitem, t.level);
    if (!inserted) it->second = std::min(it->second, t.level);
    entry.territories.push_back(std::move(t));
  }
  if (atlas.by_language_.empty()) throw ValidationError(path.string() + ": no territories loaded");

  // Keep each language's territory list in qitem order so row order never
  // shows through.
  for (auto& [language, entry] : atlas.by_language_) {
    std::sort(entry.territories.begin(), entry.territories.end(),
              [](const Territory& a, const Territory& b) { return id_less(a.qitem, b.qitem); });
  }
  return atlas;
}

bool LanguageAtlas::has_language(const std::string& language) const {
  return by_language_.count(language) > 0;
}

std::vector<std::string> LanguageAtlas::languages() const {
  std::vector<std::string> out;
  out.reserve(by_language_.size());
  for (const auto& [language, entry] : by_language_) out.push_back(language);
  return out;
}

const LanguageEntry& LanguageAtlas::entry(const std::string& language) const {
  auto it = by_language_.find(language);
  if (it == by_language_.end()) throw ValidationError("unknown language code \"" + language + "\"");
  return it->second;
}

const std::vector<Territory>& LanguageAtlas::territories_for(const std::string& language) const {
  return entry(language).territories;
}

const std::vector<QItem>& LanguageAtlas::language_qitems(const std::string& language) const {
  return entry(language).language_qitems;
}

const std::vector<std::string>& LanguageAtlas::language_keywords(const std::string& language) const {
  return entry(language).language_keywords;
}

std::set<QItem> LanguageAtlas::territory_qitems(const std::string& language) const {
  std::set<QItem> out;
  for (const auto& t : entry(language).territories) out.insert(t.qitem);
  return out;
}

std::set<QItem> LanguageAtlas::abroad_territories(const std::string& language) const {
  std::set<QItem> home = territory_qitems(language);
  std::set<QItem> out;
  for (const auto& [qitem, langs] : by_qitem_) {
    if (!home.count(qitem)) out.insert(qitem);
  }
  return out;
}

std::set<QItem> LanguageAtlas::all_territory_qitems() const {
  std::set<QItem> out;
  for (const auto& [qitem, langs] : by_qitem_) out.insert(qitem);
  return out;
}

const std::set<std::string>& LanguageAtlas::languages_of(const QItem& territory) const {
  static const std::set<std::string> kEmpty;
  auto it = by_qitem_.find(territory);
  return it == by_qitem_.end() ? kEmpty : it->second;
}

int LanguageAtlas::level_of(const QItem& territory) const {
  auto it = level_by_qitem_.find(territory);
  return it == level_by_qitem_.end() ? 1 : it->second;
}

const Territory* LanguageAtlas::find_territory(const std::string& language, const QItem& qitem) const {
  auto it = by_language_.find(language);
  if (it == by_language_.end()) return nullptr;
  for (const auto& t : it->second.territories) {
    if (t.qitem == qitem) return &t;
  }
  return nullptr;
}

Lexicon Lexicon::for_language(const LanguageAtlas& atlas, const std::string& language) {
  std::map<std::string, std::vector<LexiconOwner>> owners_by_keyword;
  for (const auto& t : atlas.territories_for(language)) {
    for (const auto& k : t.keywords) {
      owners_by_keyword[k].push_back({t.qitem, false});
    }
  }
  const auto& lq = atlas.language_qitems(language);
  if (!lq.empty()) {
    for (const auto& k : atlas.language_keywords(language)) {
      owners_by_keyword[k].push_back({lq.front(), true});
    }
  }

  Lexicon lex;
  for (auto& [keyword, owners] : owners_by_keyword) {
    std::sort(owners.begin(), owners.end(), [](const LexiconOwner& a, const LexiconOwner& b) {
      if (a.qitem != b.qitem) return id_less(a.qitem, b.qitem);
      return a.is_language < b.is_language;
    });
    owners.erase(std::unique(owners.begin(), owners.end()), owners.end());
    LexiconEntry e;
    e.keyword = keyword;
    e.tokens = tokenize(keyword);
    if (e.tokens.empty()) continue;
    e.owners = std::move(owners);
    lex.entries_.push_back(std::move(e));
  }
  return lex;
}

namespace {

const QItem& min_owner(const std::vector<LexiconOwner>& owners) {
  static const QItem kNone;
  return owners.empty() ? kNone : owners.front().qitem;  // owners are qitem-sorted
}

}  // namespace

std::optional<KeywordMatch> Lexicon::match_tokens(const std::vector<std::string>& tokens) const {
  const LexiconEntry* best = nullptr;
  std::size_t best_pos = 0;
  for (const auto& e : entries_) {
    if (e.tokens.size() > tokens.size()) continue;
    for (std::size_t pos = 0; pos + e.tokens.size() <= tokens.size(); ++pos) {
      if (!std::equal(e.tokens.begin(), e.tokens.end(), tokens.begin() + pos)) continue;
      bool better = false;
      if (!best) {
        better = true;
      } else if (e.tokens.size() != best->tokens.size()) {
        better = e.tokens.size() > best->tokens.size();
      } else if (e.keyword.size() != best->keyword.size()) {
        better = e.keyword.size() > best->keyword.size();
      } else if (pos != best_pos) {
        better = pos < best_pos;
      } else {
        better = id_less(min_owner(e.owners), min_owner(best->owners));
      }
      if (better) {
        best = &e;
        best_pos = pos;
      }
      break;  // later positions of the same keyword can only tie worse
    }
  }
  if (!best) return std::nullopt;
  return KeywordMatch{best->keyword, best->owners, best_pos};
}

std::optional<KeywordMatch> Lexicon::match_title(const std::string& title) const {
  return match_tokens(tokenize(title));
}

BoundarySet BoundarySet::load(const std::filesystem::path& path, const LanguageAtlas* atlas) {
  BoundarySet set;
  std::set<QItem> seen;
  for_each_jsonl(path, [&](const nlohmann::json& j) {
    BoundaryEntry entry;
    entry.qitem = json_string(j, "qitem");
    if (!is_qitem(entry.qitem)) {
      throw ValidationError("malformed qitem \"" + entry.qitem + "\"");
    }
    if (!seen.insert(entry.qitem).second) {
      throw ValidationError("duplicate boundary for " + entry.qitem);
    }
    auto polys = j.find("polygons");
    if (polys == j.end() || !polys->is_array()) {
      throw ValidationError("missing field \"polygons\"");
    }
    for (const auto& poly : *polys) {
      Polygon ring;
      for (const auto& vertex : poly) {
        if (!vertex.is_array() || vertex.size() != 2 || !vertex[0].is_number() ||
            !vertex[1].is_number()) {
          throw ValidationError("bad polygon vertex for " + entry.qitem);
        }
        double lat = vertex[0].get<double>();
        double lon = vertex[1].get<double>();
        if (lat < -90.0 || lat > 90.0 || lon < -180.0 || lon > 180.0) {
          throw ValidationError("coordinate out of range for " + entry.qitem);
        }
        ring.emplace_back(lat, lon);
      }
      std::set<std::pair<double, double>> distinct(ring.begin(), ring.end());
      if (distinct.size() < 3) {
        throw ValidationError("polygon for " + entry.qitem + " has fewer than 3 distinct vertices");
      }
      entry.polygons.push_back(std::move(ring));
    }
    entry.level = atlas ? atlas->level_of(entry.qitem) : 1;
    set.entries_.push_back(std::move(entry));
  });
  set.sort_entries();
  return set;
}

void BoundarySet::add(BoundaryEntry entry) {
  entries_.push_back(std::move(entry));
  sort_entries();
}

void BoundarySet::sort_entries() {
  std::sort(entries_.begin(), entries_.end(), [](const BoundaryEntry& a, const BoundaryEntry& b) {
    if (a.level != b.level) return a.level > b.level;  // level 2 probes first
    return id_less(a.qitem, b.qitem);
  });
}

bool point_in_polygon(double lat, double lon, const Polygon& polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;

  // Boundary points are contained: check each edge for collinearity within
  // the segment's extent.
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const auto& [ay, ax] = polygon[j];
    const auto& [by, bx] = polygon[i];
    double cross = (bx - ax) * (lat - ay) - (by - ay) * (lon - ax);
    if (std::abs(cross) > 1e-12) continue;
    if (lon >= std::min(ax, bx) - 1e-12 && lon <= std::max(ax, bx) + 1e-12 &&
        lat >= std::min(ay, by) - 1e-12 && lat <= std::max(ay, by) + 1e-12) {
      return true;
    }
  }

  // Crossing count with a ray toward +longitude.
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const auto& [ay, ax] = polygon[j];
    const auto& [by, bx] = polygon[i];
    if ((by > lat) != (ay > lat)) {
      double x_at = (ax - bx) * (lat - by) / (ay - by) + bx;
      if (lon < x_at) inside = !inside;
    }
  }
  return inside;
}

std::optional<QItem> reverse_geocode(double lat, double lon, const BoundarySet& boundaries) {
  for (const auto& entry : boundaries.entries()) {
    for (const auto& polygon : entry.polygons) {
      if (point_in_polygon(lat, lon, polygon)) return entry.qitem;
    }
  }
  return std::nullopt;
}

}  // namespace ccc
