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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ccc/ids.hpp"

namespace ccc {

struct PageMetrics {
  std::int64_t num_bytes = 0;
  std::int64_t num_references = 0;
  std::int64_t num_edits = 0;
  std::int64_t num_editors = 0;
  std::int64_t num_discussions = 0;
  std::int64_t num_pageviews = 0;
  int featured_article = 0;
};

struct PageRecord {
  PageId page_id = 0;
  std::string title;  // underscores for spaces, wiki style
  QItem qitem;        // empty when the article has no Wikidata item
  std::int64_t date_created = 0;  // YYYYMMDD
  PageMetrics metrics;
};

struct Category {
  std::int64_t cat_id = 0;
  std::string title;
};

struct WikidataEntity {
  QItem qitem;
  std::map<PropertyId, std::vector<QItem>> claims;
  std::map<std::string, std::string> sitelinks;  // wiki code ("itwiki") -> title
};

class WikiSnapshot;

// Assembles a snapshot record by record. add_* methods validate locally and
// throw ValidationError; build() checks cross-references (dangling link,
// category and geotag endpoints are collected and reported together).
class SnapshotBuilder {
 public:
  explicit SnapshotBuilder(std::string language) : language_(std::move(language)) {}

  void add_page(PageRecord page);
  void add_link(PageId from, PageId to);
  void add_category(std::int64_t cat_id, std::string title);
  void add_subcategory(std::int64_t parent, std::int64_t child);
  void add_member(std::int64_t cat_id, PageId page);
  void add_geotag(PageId page, double lat, double lon);
  void add_entity(WikidataEntity entity);

  WikiSnapshot build();

 private:
  friend class WikiSnapshot;

  std::string language_;
  std::map<PageId, PageRecord> pages_;
  std::set<std::string> page_titles_;
  std::vector<std::pair<PageId, PageId>> links_;
  std::map<std::int64_t, Category> categories_;
  std::set<std::string> category_titles_;
  std::vector<std::pair<std::int64_t, std::int64_t>> subcategory_edges_;
  std::vector<std::pair<std::int64_t, PageId>> member_edges_;
  std::map<PageId, std::pair<double, double>> geotags_;
  std::map<QItem, WikidataEntity> wikidata_;
};

class WikiSnapshot {
 public:
  const std::string& language() const { return language_; }

  const std::map<PageId, PageRecord>& pages() const { return pages_; }
  bool has_page(PageId id) const { return pages_.count(id) > 0; }
  const PageRecord& page(PageId id) const;  // throws for unknown ids

  const std::set<PageId>& inlinks(PageId id) const;
  const std::set<PageId>& outlinks(PageId id) const;

  std::optional<std::pair<double, double>> geotag(PageId id) const;

  const std::map<std::int64_t, Category>& categories() const { return categories_; }
  const std::set<std::int64_t>& subcategories(std::int64_t cat_id) const;
  const std::set<PageId>& members(std::int64_t cat_id) const;

  const std::map<QItem, WikidataEntity>& wikidata_entities() const { return wikidata_; }

  // nullptr when the qitem is absent from the store.
  const WikidataEntity* entity(const QItem& qitem) const;
  int interwiki_count(const QItem& qitem) const;   // throws for unknown qitems
  int wdproperty_count(const QItem& qitem) const;  // throws for unknown qitems

 private:
  friend class SnapshotBuilder;

  std::string language_;
  std::map<PageId, PageRecord> pages_;
  std::map<PageId, std::set<PageId>> forward_;
  std::map<PageId, std::set<PageId>> reverse_;
  std::map<std::int64_t, Category> categories_;
  std::map<std::int64_t, std::set<std::int64_t>> subcategories_;
  std::map<std::int64_t, std::set<PageId>> members_;
  std::map<PageId, std::pair<double, double>> geotags_;
  std::map<QItem, WikidataEntity> wikidata_;
};

// Reads the six-file JSON Lines fixture layout: pages.jsonl, links.jsonl,
// categories.jsonl, category_edges.jsonl, geotags.jsonl, wikidata.jsonl.
WikiSnapshot load_snapshot(const std::filesystem::path& dir, const std::string& language);

bool valid_date(std::int64_t yyyymmdd);

}  // namespace ccc
