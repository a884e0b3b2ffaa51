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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "ccc/snapshot.hpp"

using namespace ccc;

namespace {

PageRecord make_page(PageId id, const std::string& title, const QItem& qitem = "") {
  PageRecord page;
  page.page_id = id;
  page.title = title;
  page.qitem = qitem;
  page.date_created = 20100101;
  page.metrics.num_edits = 5;
  page.metrics.num_editors = 2;
  return page;
}

}  // namespace

TEST_CASE("date validation is leap-year aware") {
  CHECK(valid_date(20040229));   // leap year
  CHECK(valid_date(20000229));   // divisible by 400
  CHECK_FALSE(valid_date(19000229));  // divisible by 100 only
  CHECK_FALSE(valid_date(20050229));
  CHECK(valid_date(20051231));
  CHECK_FALSE(valid_date(20051301));
  CHECK_FALSE(valid_date(20050132));
  CHECK_FALSE(valid_date(20050100));
  CHECK(valid_date(101));  // 0000-01-01, the smallest encodable date
  CHECK_FALSE(valid_date(100));
  CHECK_FALSE(valid_date(0));
  CHECK_FALSE(valid_date(-20100101));
  CHECK(valid_date(20040930));
  CHECK_FALSE(valid_date(20040931));
}

TEST_CASE("builder rejects invalid pages") {
  SnapshotBuilder builder("it");
  CHECK_THROWS_AS(builder.add_page(make_page(0, "Zero")), ValidationError);
  CHECK_THROWS_AS(builder.add_page(make_page(1, "")), ValidationError);
  CHECK_THROWS_AS(builder.add_page(make_page(1, "BadQitem", "38")), ValidationError);

  PageRecord bad_date = make_page(1, "BadDate");
  bad_date.date_created = 20050229;
  CHECK_THROWS_AS(builder.add_page(bad_date), ValidationError);

  PageRecord negative = make_page(1, "Negative");
  negative.metrics.num_bytes = -1;
  CHECK_THROWS_AS(builder.add_page(negative), ValidationError);

  PageRecord featured = make_page(1, "Featured");
  featured.metrics.featured_article = 2;
  CHECK_THROWS_AS(builder.add_page(featured), ValidationError);

  PageRecord editors = make_page(1, "Editors");
  editors.metrics.num_edits = 1;
  editors.metrics.num_editors = 2;
  CHECK_THROWS_AS(builder.add_page(editors), ValidationError);

  builder.add_page(make_page(1, "Fine", "Q1"));
  CHECK_THROWS_AS(builder.add_page(make_page(1, "OtherTitle")), ValidationError);
  CHECK_THROWS_AS(builder.add_page(make_page(2, "Fine")), ValidationError);
}

TEST_CASE("builder rejects invalid geotags and entities") {
  SnapshotBuilder builder("it");
  builder.add_page(make_page(1, "A"));
  CHECK_THROWS_AS(builder.add_geotag(1, 91.0, 0.0), ValidationError);
  CHECK_THROWS_AS(builder.add_geotag(1, 0.0, 181.0), ValidationError);
  builder.add_geotag(1, 45.0, 9.0);
  CHECK_THROWS_AS(builder.add_geotag(1, 45.0, 9.0), ValidationError);  // duplicate

  WikidataEntity bad_id;
  bad_id.qitem = "X1";
  CHECK_THROWS_AS(builder.add_entity(bad_id), ValidationError);

  WikidataEntity bad_prop;
  bad_prop.qitem = "Q1";
  bad_prop.claims["17"] = {"Q38"};
  CHECK_THROWS_AS(builder.add_entity(bad_prop), ValidationError);

  WikidataEntity empty_claim;
  empty_claim.qitem = "Q1";
  empty_claim.claims["P17"] = {};
  CHECK_THROWS_AS(builder.add_entity(empty_claim), ValidationError);
}

TEST_CASE("build collects all dangling references in one error") {
  SnapshotBuilder builder("it");
  builder.add_page(make_page(1, "A"));
  builder.add_link(1, 999);
  builder.add_link(998, 1);
  builder.add_category(10, "Cat");
  builder.add_member(10, 777);
  builder.add_subcategory(10, 11);
  builder.add_geotag(555, 1.0, 2.0);
  try {
    builder.build();
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    std::string message = e.what();
    CHECK(message.find("5 dangling reference(s)") != std::string::npos);
    CHECK(message.find("999") != std::string::npos);
    CHECK(message.find("998") != std::string::npos);
    CHECK(message.find("777") != std::string::npos);
    CHECK(message.find("11") != std::string::npos);
    CHECK(message.find("555") != std::string::npos);
  }
}

TEST_CASE("snapshot accessors answer links, geotags and wikidata") {
  SnapshotBuilder builder("it");
  builder.add_page(make_page(1, "A", "Q1"));
  builder.add_page(make_page(2, "B"));
  builder.add_page(make_page(3, "C"));
  builder.add_link(1, 2);
  builder.add_link(3, 2);
  builder.add_link(1, 3);
  builder.add_geotag(2, 45.0, 9.0);
  builder.add_category(10, "Cat");
  builder.add_category(11, "Sub");
  builder.add_subcategory(10, 11);
  builder.add_member(11, 3);
  WikidataEntity e;
  e.qitem = "Q1";
  e.claims["P17"] = {"Q38"};
  e.claims["P31"] = {"Q5"};
  e.sitelinks["itwiki"] = "A";
  e.sitelinks["enwiki"] = "A (en)";
  builder.add_entity(e);
  WikiSnapshot snapshot = builder.build();

  CHECK(snapshot.language() == "it");
  CHECK(snapshot.pages().size() == 3);
  CHECK(snapshot.page(1).title == "A");
  CHECK_THROWS_AS(snapshot.page(42), ValidationError);

  CHECK(snapshot.outlinks(1) == std::set<PageId>{2, 3});
  CHECK(snapshot.inlinks(2) == std::set<PageId>{1, 3});
  CHECK(snapshot.inlinks(1).empty());
  CHECK_THROWS_AS(snapshot.outlinks(42), ValidationError);

  REQUIRE(snapshot.geotag(2).has_value());
  CHECK(snapshot.geotag(2)->first == 45.0);
  CHECK_FALSE(snapshot.geotag(1).has_value());

  CHECK(snapshot.subcategories(10) == std::set<std::int64_t>{11});
  CHECK(snapshot.members(11) == std::set<PageId>{3});

  REQUIRE(snapshot.entity("Q1") != nullptr);
  CHECK(snapshot.entity("Q404") == nullptr);
  CHECK(snapshot.wdproperty_count("Q1") == 2);
  CHECK(snapshot.interwiki_count("Q1") == 2);
  CHECK_THROWS_AS(snapshot.interwiki_count("Q404"), ValidationError);
}

TEST_CASE("duplicate links collapse to one edge") {
  SnapshotBuilder builder("it");
  builder.add_page(make_page(1, "A"));
  builder.add_page(make_page(2, "B"));
  builder.add_link(1, 2);
  builder.add_link(1, 2);
  WikiSnapshot snapshot = builder.build();
  CHECK(snapshot.outlinks(1).size() == 1);
  CHECK(snapshot.inlinks(2).size() == 1);
}

TEST_CASE("load_snapshot reads the parmigiano fixture") {
  WikiSnapshot snapshot =
      load_snapshot(std::filesystem::path(CCC_FIXTURES_DIR) / "parmigiano", "it");
  CHECK(snapshot.pages().size() == 881);
  CHECK(snapshot.inlinks(1).size() == 141);
  CHECK(snapshot.outlinks(1).size() == 739);
  CHECK(snapshot.page(1).title == "Parmigiano_Reggiano");
  CHECK(snapshot.page(1).metrics.num_bytes == 13815);
  CHECK(snapshot.wdproperty_count("Q155922") == 16);
  CHECK(snapshot.interwiki_count("Q155922") == 59);
  CHECK(snapshot.categories().size() == 2);
  CHECK_FALSE(snapshot.geotag(1).has_value());
}

TEST_CASE("load_snapshot reports missing files and bad namespaces") {
  auto dir = std::filesystem::temp_directory_path() / "cccgen_snapshot_missing";
  std::filesystem::create_directories(dir);
  std::filesystem::remove(dir / "pages.jsonl");
  try {
    load_snapshot(dir, "it");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("pages.jsonl") != std::string::npos);
  }

  for (const char* name : {"pages.jsonl", "links.jsonl", "categories.jsonl",
                           "category_edges.jsonl", "geotags.jsonl", "wikidata.jsonl"}) {
    std::ofstream out(dir / name);
  }
  {
    std::ofstream out(dir / "pages.jsonl");
    out << "{\"page_id\":1,\"title\":\"A\",\"namespace\":4,\"date_created\":20100101,"
           "\"bytes\":1,\"references\":0,\"edits\":1,\"editors\":1,\"discussions\":0,"
           "\"pageviews\":0}\n";
  }
  try {
    load_snapshot(dir, "it");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("namespace") != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}
