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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ccc/ids.hpp"

namespace ccc {

struct Territory {
  QItem qitem;
  std::string iso3166;   // 2-letter country code
  std::string iso31662;  // region code "XX-YYY"; empty for level-1 territories
  int level = 1;         // 2 iff iso31662 is present
  std::vector<std::string> keywords;  // lowercased names and demonyms
};

// Per-language row group: territories where the language is spoken plus the
// language's own Wikidata ids and names (used for language-property matching
// and keyword lexicons).
struct LanguageEntry {
  std::vector<Territory> territories;
  std::vector<QItem> language_qitems;           // first entry is the language itself
  std::vector<std::string> language_keywords;   // lowercased language names
};

class LanguageAtlas {
 public:
  // Atlas CSV columns: language,qitem,iso3166,iso31662,keywords with
  // `keywords` ;-separated. Two optional trailing columns carry the
  // language's own qitems (first = language, rest dialects) and names;
  // non-empty cells must agree across a language's rows.
  static LanguageAtlas load(const std::filesystem::path& path);

  bool has_language(const std::string& language) const;
  std::vector<std::string> languages() const;

  // Throws ValidationError for unknown language codes.
  const std::vector<Territory>& territories_for(const std::string& language) const;
  const std::vector<QItem>& language_qitems(const std::string& language) const;
  const std::vector<std::string>& language_keywords(const std::string& language) const;

  std::set<QItem> territory_qitems(const std::string& language) const;
  std::set<QItem> abroad_territories(const std::string& language) const;
  std::set<QItem> all_territory_qitems() const;

  // Languages a territory is mapped to; empty set for unknown qitems.
  const std::set<std::string>& languages_of(const QItem& territory) const;

  // 2 when every row for the qitem carries a region code, else 1.
  int level_of(const QItem& territory) const;

  // Territory fields for a (language, qitem) pair, or nullptr.
  const Territory* find_territory(const std::string& language, const QItem& qitem) const;

 private:
  const LanguageEntry& entry(const std::string& language) const;

  std::map<std::string, LanguageEntry> by_language_;
  std::map<QItem, std::set<std::string>> by_qitem_;
  std::map<QItem, int> level_by_qitem_;
};

// A keyword owner: the territory or language the keyword names.
struct LexiconOwner {
  QItem qitem;
  bool is_language = false;

  friend bool operator==(const LexiconOwner&, const LexiconOwner&) = default;
};

struct LexiconEntry {
  std::string keyword;               // lowercased, as loaded
  std::vector<std::string> tokens;   // tokenize(keyword)
  std::vector<LexiconOwner> owners;  // deduped, ordered by qitem
};

struct KeywordMatch {
  std::string keyword;
  std::vector<LexiconOwner> owners;
  std::size_t position = 0;  // token index of match start
};

class Lexicon {
 public:
  static Lexicon for_language(const LanguageAtlas& atlas, const std::string& language);

  const std::vector<LexiconEntry>& entries() const { return entries_; }

  // Longest contiguous token-sequence match: more tokens win, then longer
  // keyword text, then earlier position, then smallest min owner qitem.
  std::optional<KeywordMatch> match_tokens(const std::vector<std::string>& tokens) const;
  std::optional<KeywordMatch> match_title(const std::string& title) const;

 private:
  std::vector<LexiconEntry> entries_;
};

using Polygon = std::vector<std::pair<double, double>>;  // (lat, lon) vertices

struct BoundaryEntry {
  QItem qitem;
  int level = 1;
  std::vector<Polygon> polygons;
};

class BoundarySet {
 public:
  // JSON Lines: {"qitem":"Q38","polygons":[[[lat,lon],...],...]}. Levels are
  // filled from the atlas when given so regions shadow their country.
  static BoundarySet load(const std::filesystem::path& path, const LanguageAtlas* atlas = nullptr);

  // Probe order: level-2 entries before level-1, then ascending qitem.
  const std::vector<BoundaryEntry>& entries() const { return entries_; }

  void add(BoundaryEntry entry);  // used by tests; re-sorts

 private:
  void sort_entries();

  std::vector<BoundaryEntry> entries_;
};

// Ray-casting containment; points on a boundary edge count as contained.
bool point_in_polygon(double lat, double lon, const Polygon& polygon);

std::optional<QItem> reverse_geocode(double lat, double lon, const BoundarySet& boundaries);

}  // namespace ccc
