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

#include "ccc/snapshot.hpp"

#include <sstream>

#include "ccc/jsonl.hpp"

namespace ccc {

bool valid_date(std::int64_t yyyymmdd) {
  if (yyyymmdd < 101) return false;
  std::int64_t year = yyyymmdd / 10000;
  std::int64_t month = (yyyymmdd / 100) % 100;
  std::int64_t day = yyyymmdd % 100;
  if (month < 1 || month > 12 || day < 1) return false;
  static const int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  std::int64_t limit = days[month - 1];
  bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  if (month == 2 && leap) limit = 29;
  return day <= limit;
}

namespace {

void check_nonnegative(std::int64_t v, const char* name) {
  if (v < 0) throw ValidationError(std::string(name) + " is negative");
}

}  // namespace

void SnapshotBuilder::add_page(PageRecord page) {
  if (page.page_id <= 0) throw ValidationError("page_id must be positive");
  if (page.title.empty()) throw ValidationError("empty page title");
  if (!page.qitem.empty() && !is_qitem(page.qitem)) {
    throw ValidationError("malformed qitem \"" + page.qitem + "\"");
  }
  if (!valid_date(page.date_created)) {
    throw ValidationError("invalid date_created " + std::to_string(page.date_created));
  }
  const auto& m = page.metrics;
  check_nonnegative(m.num_bytes, "bytes");
  check_nonnegative(m.num_references, "references");
  check_nonnegative(m.num_edits, "edits");
  check_nonnegative(m.num_editors, "editors");
  check_nonnegative(m.num_discussions, "discussions");
  check_nonnegative(m.num_pageviews, "pageviews");
  if (m.featured_article != 0 && m.featured_article != 1) {
    throw ValidationError("featured flag must be 0 or 1");
  }
  if (m.num_editors > m.num_edits) {
    throw ValidationError("editors exceed edits for page " + std::to_string(page.page_id));
  }
  if (pages_.count(page.page_id)) {
    throw ValidationError("duplicate page_id " + std::to_string(page.page_id));
  }
  if (!page_titles_.insert(page.title).second) {
    throw ValidationError("duplicate page title \"" + page.title + "\"");
  }
  pages_.emplace(page.page_id, std::move(page));
}

void SnapshotBuilder::add_link(PageId from, PageId to) {
  links_.emplace_back(from, to);
}

void SnapshotBuilder::add_category(std::int64_t cat_id, std::string title) {
  if (cat_id <= 0) throw ValidationError("cat_id must be positive");
  if (title.empty()) throw ValidationError("empty category title");
  if (categories_.count(cat_id)) {
    throw ValidationError("duplicate cat_id " + std::to_string(cat_id));
  }
  if (!category_titles_.insert(title).second) {
    throw ValidationError("duplicate category title \"" + title + "\"");
  }
  categories_.emplace(cat_id, Category{cat_id, std::move(title)});
}

void SnapshotBuilder::add_subcategory(std::int64_t parent, std::int64_t child) {
  subcategory_edges_.emplace_back(parent, child);
}

void SnapshotBuilder::add_member(std::int64_t cat_id, PageId page) {
  member_edges_.emplace_back(cat_id, page);
}

void SnapshotBuilder::add_geotag(PageId page, double lat, double lon) {
  if (lat < -90.0 || lat > 90.0 || lon < -180.0 || lon > 180.0) {
    throw ValidationError("coordinate out of range for page " + std::to_string(page));
  }
  if (geotags_.count(page)) {
    throw ValidationError("duplicate geotag for page " + std::to_string(page));
  }
  geotags_.emplace(page, std::make_pair(lat, lon));
}

void SnapshotBuilder::add_entity(WikidataEntity entity) {
  if (!is_qitem(entity.qitem)) {
    throw ValidationError("malformed qitem \"" + entity.qitem + "\"");
  }
  if (wikidata_.count(entity.qitem)) {
    throw ValidationError("duplicate entity " + entity.qitem);
  }
  for (const auto& [prop, values] : entity.claims) {
    if (!is_property_id(prop)) throw ValidationError("malformed property \"" + prop + "\"");
    if (values.empty()) throw ValidationError("empty claim list for " + prop);
    for (const auto& v : values) {
      if (!is_qitem(v)) throw ValidationError("malformed claim value \"" + v + "\"");
    }
  }
  wikidata_.emplace(entity.qitem, std::move(entity));
}

WikiSnapshot SnapshotBuilder::build() {
  std::vector<std::string> dangling;
  auto missing_page = [&](PageId id) { return pages_.count(id) == 0; };
  auto missing_cat = [&](std::int64_t id) { return categories_.count(id) == 0; };

  WikiSnapshot snap;
  snap.language_ = language_;

  for (const auto& [from, to] : links_) {
    if (missing_page(from) || missing_page(to)) {
      dangling.push_back("link " + std::to_string(from) + "->" + std::to_string(to) +
                         " references unknown page " +
                         std::to_string(missing_page(from) ? from : to));
      continue;
    }
    snap.forward_[from].insert(to);
    snap.reverse_[to].insert(from);
  }
  for (const auto& [parent, child] : subcategory_edges_) {
    if (missing_cat(parent) || missing_cat(child)) {
      dangling.push_back("subcategory edge " + std::to_string(parent) + "->" +
                         std::to_string(child) + " references unknown category " +
                         std::to_string(missing_cat(parent) ? parent : child));
      continue;
    }
    snap.subcategories_[parent].insert(child);
  }
  for (const auto& [cat, page] : member_edges_) {
    if (missing_cat(cat)) {
      dangling.push_back("membership edge references unknown category " + std::to_string(cat));
      continue;
    }
    if (missing_page(page)) {
      dangling.push_back("membership edge references unknown page " + std::to_string(page));
      continue;
    }
    snap.members_[cat].insert(page);
  }
  for (const auto& tag : geotags_) {
    if (missing_page(tag.first)) {
      dangling.push_back("geotag references unknown page " + std::to_string(tag.first));
    }
  }
  if (!dangling.empty()) {
    std::ostringstream out;
    out << dangling.size() << " dangling reference(s):";
    for (const auto& d : dangling) out << "\n  " << d;
    throw ValidationError(out.str());
  }

  snap.pages_ = std::move(pages_);
  snap.categories_ = std::move(categories_);
  snap.geotags_ = std::move(geotags_);
  snap.wikidata_ = std::move(wikidata_);
  return snap;
}

const PageRecord& WikiSnapshot::page(PageId id) const {
  auto it = pages_.find(id);
  if (it == pages_.end()) throw ValidationError("unknown page_id " + std::to_string(id));
  return it->second;
}

namespace {
const std::set<PageId>& empty_page_set() {
  static const std::set<PageId> kEmpty;
  return kEmpty;
}
const std::set<std::int64_t>& empty_cat_set() {
  static const std::set<std::int64_t> kEmpty;
  return kEmpty;
}
}  // namespace

const std::set<PageId>& WikiSnapshot::inlinks(PageId id) const {
  if (!has_page(id)) throw ValidationError("unknown page_id " + std::to_string(id));
  auto it = reverse_.find(id);
  return it == reverse_.end() ? empty_page_set() : it->second;
}

const std::set<PageId>& WikiSnapshot::outlinks(PageId id) const {
  if (!has_page(id)) throw ValidationError("unknown page_id " + std::to_string(id));
  auto it = forward_.find(id);
  return it == forward_.end() ? empty_page_set() : it->second;
}

std::optional<std::pair<double, double>> WikiSnapshot::geotag(PageId id) const {
  auto it = geotags_.find(id);
  if (it == geotags_.end()) return std::nullopt;
  return it->second;
}

const std::set<std::int64_t>& WikiSnapshot::subcategories(std::int64_t cat_id) const {
  auto it = subcategories_.find(cat_id);
  return it == subcategories_.end() ? empty_cat_set() : it->second;
}

const std::set<PageId>& WikiSnapshot::members(std::int64_t cat_id) const {
  auto it = members_.find(cat_id);
  return it == members_.end() ? empty_page_set() : it->second;
}

const WikidataEntity* WikiSnapshot::entity(const QItem& qitem) const {
  auto it = wikidata_.find(qitem);
  return it == wikidata_.end() ? nullptr : &it->second;
}

int WikiSnapshot::interwiki_count(const QItem& qitem) const {
  const WikidataEntity* e = entity(qitem);
  if (!e) throw ValidationError("unknown qitem " + qitem);
  return static_cast<int>(e->sitelinks.size());
}

int WikiSnapshot::wdproperty_count(const QItem& qitem) const {
  const WikidataEntity* e = entity(qitem);
  if (!e) throw ValidationError("unknown qitem " + qitem);
  return static_cast<int>(e->claims.size());
}

WikiSnapshot load_snapshot(const std::filesystem::path& dir, const std::string& language) {
  for (const char* name : {"pages.jsonl", "links.jsonl", "categories.jsonl",
                           "category_edges.jsonl", "geotags.jsonl", "wikidata.jsonl"}) {
    if (!std::filesystem::exists(dir / name)) {
      throw ValidationError("missing file " + (dir / name).string());
    }
  }

  SnapshotBuilder builder(language);

  for_each_jsonl(dir / "pages.jsonl", [&](const nlohmann::json& j) {
    std::int64_t ns = json_int_or(j, "namespace", 0);
    if (ns != 0) throw ValidationError("unsupported namespace " + std::to_string(ns));
    PageRecord page;
    page.page_id = json_int(j, "page_id");
    page.title = json_string(j, "title");
    page.qitem = json_string_or(j, "qitem", "");
    page.date_created = json_int(j, "date_created");
    page.metrics.num_bytes = json_int(j, "bytes");
    page.metrics.num_references = json_int(j, "references");
    page.metrics.num_edits = json_int(j, "edits");
    page.metrics.num_editors = json_int(j, "editors");
    page.metrics.num_discussions = json_int(j, "discussions");
    page.metrics.num_pageviews = json_int(j, "pageviews");
    page.metrics.featured_article = static_cast<int>(json_int_or(j, "featured", 0));
    builder.add_page(std::move(page));
  });

  for_each_jsonl(dir / "links.jsonl", [&](const nlohmann::json& j) {
    builder.add_link(json_int(j, "from"), json_int(j, "to"));
  });

  for_each_jsonl(dir / "categories.jsonl", [&](const nlohmann::json& j) {
    builder.add_category(json_int(j, "cat_id"), json_string(j, "title"));
  });

  for_each_jsonl(dir / "category_edges.jsonl", [&](const nlohmann::json& j) {
    std::string kind = json_string(j, "child_kind");
    if (kind == "category") {
      builder.add_subcategory(json_int(j, "parent"), json_int(j, "child"));
    } else if (kind == "article") {
      builder.add_member(json_int(j, "parent"), json_int(j, "child"));
    } else {
      throw ValidationError("bad child_kind \"" + kind + "\"");
    }
  });

  for_each_jsonl(dir / "geotags.jsonl", [&](const nlohmann::json& j) {
    builder.add_geotag(json_int(j, "page_id"), json_double(j, "lat"), json_double(j, "lon"));
  });

  for_each_jsonl(dir / "wikidata.jsonl", [&](const nlohmann::json& j) {
    WikidataEntity e;
    e.qitem = json_string(j, "qitem");
    auto claims = j.find("claims");
    if (claims != j.end() && !claims->is_null()) {
      if (!claims->is_object()) throw ValidationError("field \"claims\" is not an object");
      for (const auto& [prop, values] : claims->items()) {
        if (!values.is_array()) throw ValidationError("claim " + prop + " is not an array");
        std::vector<QItem> list;
        for (const auto& v : values) {
          if (!v.is_string()) throw ValidationError("claim " + prop + " has a non-string value");
          list.push_back(v.get<std::string>());
        }
        e.claims.emplace(prop, std::move(list));
      }
    }
    auto sitelinks = j.find("sitelinks");
    if (sitelinks != j.end() && !sitelinks->is_null()) {
      if (!sitelinks->is_object()) throw ValidationError("field \"sitelinks\" is not an object");
      for (const auto& [wiki, title] : sitelinks->items()) {
        if (!title.is_string()) throw ValidationError("sitelink " + wiki + " is not a string");
        e.sitelinks.emplace(wiki, title.get<std::string>());
      }
    }
    builder.add_entity(std::move(e));
  });

  return builder.build();
}

}  // namespace ccc
