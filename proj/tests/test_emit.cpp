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
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <sqlite3.h>

#include "ccc/attribution.hpp"
#include "ccc/emit.hpp"
#include "ccc/features.hpp"
#include "ccc/snapshot.hpp"

using namespace ccc;

namespace {

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct FixturePipeline {
  LanguageAtlas atlas;
  BoundarySet boundaries;
  WikiSnapshot snapshot;
  std::vector<QualificationRecord> records;

  FixturePipeline()
      : atlas(LanguageAtlas::load(std::filesystem::path(CCC_FIXTURES_DIR) / "atlas.csv")),
        boundaries(BoundarySet::load(std::filesystem::path(CCC_FIXTURES_DIR) / "boundaries.jsonl",
                                     &atlas)),
        snapshot(load_snapshot(std::filesystem::path(CCC_FIXTURES_DIR) / "parmigiano", "it")) {
    records = qualify_all(snapshot, atlas, boundaries, PropertyCatalog::defaults());
    for (auto& r : records) {
      r.ccc_binary = r.class_label == QualLabel::ReliablyCCC ? 1 : 0;
    }
    attribute_main_territory(records, atlas, "it");
  }
};

const FixturePipeline& fixture() {
  static FixturePipeline p;
  return p;
}

const QualificationRecord& fixture_record(PageId id) {
  for (const auto& r : fixture().records) {
    if (r.page_id == id) return r;
  }
  REQUIRE(false);
  static QualificationRecord dummy;
  return dummy;
}

std::string cell(const std::vector<std::string>& row, const std::string& column) {
  const auto& columns = dataset_columns();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == column) return row[i];
  }
  REQUIRE(false);
  return {};
}

// A tiny self-consistent snapshot plus records for conversion edge cases.
struct TinyWorld {
  WikiSnapshot snapshot;
  std::vector<QualificationRecord> records;

  TinyWorld() : snapshot(build_snapshot()) {
    for (const auto& [id, page] : snapshot.pages()) {
      QualificationRecord r;
      r.page_id = id;
      r.qitem = page.qitem;
      r.page_title = page.title;
      r.date_created = page.date_created;
      records.push_back(r);
    }
  }

  static WikiSnapshot build_snapshot() {
    SnapshotBuilder builder("cs");
    PageRecord a;
    a.page_id = 1;
    a.title = "Plain";
    a.date_created = 20150401;
    a.metrics.num_bytes = 10;
    a.metrics.num_edits = 4;
    a.metrics.num_editors = 2;
    builder.add_page(a);
    PageRecord b;
    b.page_id = 2;
    b.title = "Weird,\"Title\"\nwith_newline";
    b.qitem = "Q5";
    b.date_created = 20200229;  // leap day survives the round trip
    b.metrics.num_edits = 1;
    b.metrics.num_editors = 1;
    b.metrics.featured_article = 1;
    builder.add_page(b);
    builder.add_geotag(2, 50.0875, 14.4214);
    WikidataEntity e;
    e.qitem = "Q5";
    e.claims["P31"] = {"Q5119"};
    e.sitelinks["cswiki"] = "Weird";
    e.sitelinks["enwiki"] = "Weird_(en)";
    builder.add_entity(e);
    return builder.build();
  }
};

}  // namespace

TEST_CASE("the dataset schema is the 49 column contract") {
  const auto& columns = dataset_columns();
  REQUIRE(columns.size() == kDatasetColumnCount);
  const std::vector<std::string> expected = {
      "qitem", "page_id", "page_title", "date_created", "geocoordinates", "iso3166",
      "iso31662", "ccc_binary", "main_territory", "num_retrieval_strategies",
      "ccc_geolocated", "country_wd", "location_wd", "language_strong_wd", "created_by_wd",
      "part_of_wd", "keyword_title", "category_crawling_territories",
      "category_crawling_level", "language_weak_wd", "affiliation_wd", "has_part_wd",
      "num_inlinks_from_CCC", "num_outlinks_to_CCC", "percent_inlinks_from_CCC",
      "percent_outlinks_to_CCC", "other_ccc_country_wd", "other_ccc_location_wd",
      "other_ccc_language_strong_wd", "other_ccc_created_by_wd", "other_ccc_part_of_wd",
      "other_ccc_language_weak_wd", "other_ccc_affiliation_wd", "other_ccc_has_part_wd",
      "num_inlinks_from_geolocated_abroad", "num_outlinks_to_geolocated_abroad",
      "percent_inlinks_from_geolocated_abroad", "percent_outlinks_to_geolocated_abroad",
      "num_inlinks", "num_outlinks", "num_bytes", "num_references", "num_edits",
      "num_editors", "num_discussions", "num_pageviews", "num_wdproperty", "num_interwiki",
      "featured_article"};
  CHECK(columns == expected);
}

TEST_CASE("the flagship article row carries the expected cells") {
  const FixturePipeline& p = fixture();
  std::vector<std::string> row = dataset_row(fixture_record(1), p.snapshot);
  REQUIRE(row.size() == kDatasetColumnCount);

  CHECK(cell(row, "qitem") == "Q155922");
  CHECK(cell(row, "page_id") == "1");
  CHECK(cell(row, "date_created") == "20040913");
  CHECK(cell(row, "geocoordinates") == "");
  CHECK(cell(row, "iso3166") == "");
  CHECK(cell(row, "ccc_binary") == "1");
  CHECK(cell(row, "main_territory") == "Q38");
  CHECK(cell(row, "num_retrieval_strategies") == "5");
  CHECK(cell(row, "ccc_geolocated") == "");
  CHECK(cell(row, "country_wd") == "P495:Q38");
  CHECK(cell(row, "location_wd") == "P1071:Q1263;P1071:Q16228");
  CHECK(cell(row, "language_strong_wd") == "");
  CHECK(cell(row, "keyword_title") == "");
  CHECK(cell(row, "category_crawling_territories") == "Q38;Q652");
  CHECK(cell(row, "category_crawling_level") == "1");
  CHECK(cell(row, "num_inlinks_from_CCC") == "122");
  CHECK(cell(row, "num_outlinks_to_CCC") == "206");
  CHECK(cell(row, "percent_inlinks_from_CCC") == "0.8652");
  CHECK(cell(row, "percent_outlinks_to_CCC") == "0.2788");
  CHECK(cell(row, "num_inlinks_from_geolocated_abroad") == "3");
  CHECK(cell(row, "num_outlinks_to_geolocated_abroad") == "9");
  CHECK(cell(row, "percent_inlinks_from_geolocated_abroad") == "0.0213");
  CHECK(cell(row, "percent_outlinks_to_geolocated_abroad") == "0.0122");
  CHECK(cell(row, "num_inlinks") == "141");
  CHECK(cell(row, "num_outlinks") == "739");
  CHECK(cell(row, "num_bytes") == "13815");
  CHECK(cell(row, "num_references") == "16");
  CHECK(cell(row, "num_edits") == "471");
  CHECK(cell(row, "num_editors") == "268");
  CHECK(cell(row, "num_discussions") == "16");
  CHECK(cell(row, "num_pageviews") == "639");
  CHECK(cell(row, "num_wdproperty") == "16");
  CHECK(cell(row, "num_interwiki") == "59");
  CHECK(cell(row, "featured_article") == "");
}

TEST_CASE("empty cells mean no data, zero cells mean zero") {
  TinyWorld world;
  std::vector<std::string> plain = dataset_row(world.records[0], world.snapshot);
  CHECK(cell(plain, "qitem") == "");
  CHECK(cell(plain, "geocoordinates") == "");
  CHECK(cell(plain, "ccc_geolocated") == "");
  CHECK(cell(plain, "category_crawling_level") == "");
  CHECK(cell(plain, "featured_article") == "");
  CHECK(cell(plain, "num_wdproperty") == "0");   // no entity: counted as zero
  CHECK(cell(plain, "num_interwiki") == "0");
  CHECK(cell(plain, "num_inlinks") == "0");
  CHECK(cell(plain, "percent_inlinks_from_CCC") == "0.0000");
  CHECK(cell(plain, "main_territory") == "");

  QualificationRecord& geo = world.records[1];
  geo.has_geotag = true;
  geo.lat = 50.0875;
  geo.lon = 14.4214;
  geo.ccc_geolocated = -1;
  geo.crawl.level = 0;
  std::vector<std::string> tagged = dataset_row(geo, world.snapshot);
  CHECK(cell(tagged, "geocoordinates") == "50.0875;14.4214");
  CHECK(cell(tagged, "ccc_geolocated") == "-1");
  CHECK(cell(tagged, "category_crawling_level") == "0");
  CHECK(cell(tagged, "featured_article") == "1");
  CHECK(cell(tagged, "num_wdproperty") == "1");
  CHECK(cell(tagged, "num_interwiki") == "2");
}

TEST_CASE("dataset_row rejects inconsistent records") {
  TinyWorld world;
  QualificationRecord bad = world.records[0];
  bad.ccc_binary = 2;
  CHECK_THROWS_WITH_AS(dataset_row(bad, world.snapshot),
                       "page 1: ccc_binary out of range", ValidationError);

  QualificationRecord tampered = world.records[0];
  tampered.percent_inlinks_from_ccc = 0.25;  // but the page has no inlinks
  CHECK_THROWS_WITH_AS(dataset_row(tampered, world.snapshot),
                       "page 1: percent_inlinks_from_CCC does not match its counts",
                       ValidationError);

  const FixturePipeline& p = fixture();
  QualificationRecord off = fixture_record(1);
  off.outlinks_to_abroad += 1;
  CHECK_THROWS_WITH_AS(dataset_row(off, p.snapshot),
                       "page 1: percent_outlinks_to_geolocated_abroad does not match its counts",
                       ValidationError);
}

TEST_CASE("CSV emission round-trips losslessly, plain and compressed") {
  const FixturePipeline& p = fixture();
  auto plain = temp_file("cccgen_emit.csv");
  auto packed = temp_file("cccgen_emit.csv.bz2");

  CHECK(emit_csv(p.records, p.snapshot, plain, false) == p.records.size());
  CHECK(emit_csv(p.records, p.snapshot, packed, true) == p.records.size());
  CHECK(slurp(plain).size() > slurp(packed).size());

  for (const auto& path : {plain, packed}) {
    DatasetTable table = read_dataset_csv(path);
    CHECK(table.header == dataset_columns());
    REQUIRE(table.rows.size() == p.records.size());
    // rows come back sorted by page_id, one per record, cell-identical
    PageId previous = 0;
    for (const auto& row : table.rows) {
      PageId id = std::stoll(cell(row, "page_id"));
      CHECK(id > previous);
      previous = id;
    }
    CHECK(table.rows[0] == dataset_row(fixture_record(1), p.snapshot));
  }

  auto again = temp_file("cccgen_emit2.csv");
  emit_csv(p.records, p.snapshot, again, false);
  CHECK(slurp(plain) == slurp(again));
  auto packed_again = temp_file("cccgen_emit2.csv.bz2");
  emit_csv(p.records, p.snapshot, packed_again, true);
  CHECK(slurp(packed) == slurp(packed_again));

  for (const auto& path : {plain, packed, again, packed_again}) {
    std::filesystem::remove(path);
  }
}

TEST_CASE("emission sorts rows and escapes hostile titles") {
  TinyWorld world;
  std::swap(world.records[0], world.records[1]);  // unsorted input
  auto path = temp_file("cccgen_tiny.csv");
  CHECK(emit_csv(world.records, world.snapshot, path, false) == 2);

  DatasetTable table = read_dataset_csv(path);
  REQUIRE(table.rows.size() == 2);
  CHECK(cell(table.rows[0], "page_id") == "1");
  CHECK(cell(table.rows[1], "page_title") == "Weird,\"Title\"\nwith_newline");
  CHECK(cell(table.rows[1], "date_created") == "20200229");
  std::filesystem::remove(path);
}

TEST_CASE("read_dataset_csv flags structural damage") {
  auto path = temp_file("cccgen_damaged.csv");
  {
    std::ofstream out(path);
  }
  CHECK_THROWS_WITH_AS(read_dataset_csv(path), (path.string() + ": empty dataset").c_str(),
                       ValidationError);
  {
    std::ofstream out(path);
    out << "a,b,c\n1,2,3\n4,5\n";
  }
  CHECK_THROWS_WITH_AS(read_dataset_csv(path), (path.string() + ":3: wrong column count").c_str(),
                       ValidationError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_dataset_csv(path), ValidationError);
}

TEST_CASE("sqlite export mirrors the CSV cells table by table") {
  const FixturePipeline& p = fixture();
  TinyWorld world;
  std::map<std::string, LanguageDataset> datasets;
  datasets["it"] = {&p.records, &p.snapshot};
  datasets["cs"] = {&world.records, &world.snapshot};

  auto path = temp_file("cccgen_test.sqlite");
  CHECK(emit_sqlite(datasets, path) == 2);

  sqlite3* db = nullptr;
  REQUIRE(sqlite3_open(path.string().c_str(), &db) == SQLITE_OK);

  sqlite3_stmt* stmt = nullptr;
  REQUIRE(sqlite3_prepare_v2(db, "SELECT name FROM sqlite_master WHERE type='table' ORDER BY name",
                             -1, &stmt, nullptr) == SQLITE_OK);
  std::vector<std::string> tables;
  while (sqlite3_step(stmt) == SQLITE_ROW) {
    tables.push_back(reinterpret_cast<const char*>(sqlite3_column_text(stmt, 0)));
  }
  sqlite3_finalize(stmt);
  CHECK(tables == std::vector<std::string>{"cs", "it"});

  REQUIRE(sqlite3_prepare_v2(db, "SELECT * FROM \"it\" ORDER BY page_id", -1, &stmt, nullptr) ==
          SQLITE_OK);
  REQUIRE(sqlite3_column_count(stmt) == kDatasetColumnCount);
  std::size_t seen = 0;
  while (sqlite3_step(stmt) == SQLITE_ROW) {
    PageId id = sqlite3_column_int64(stmt, 1);
    std::vector<std::string> expected = dataset_row(fixture_record(id), p.snapshot);
    for (int i = 0; i < kDatasetColumnCount; ++i) {
      const unsigned char* text = sqlite3_column_text(stmt, i);
      std::string got = text ? reinterpret_cast<const char*>(text) : "";
      if (got != expected[i]) {
        CAPTURE(id);
        CAPTURE(dataset_columns()[i]);
        CHECK(got == expected[i]);
      }
    }
    ++seen;
  }
  sqlite3_finalize(stmt);
  CHECK(seen == p.records.size());
  sqlite3_close(db);

  // deterministic bytes: a second export is identical
  auto again = temp_file("cccgen_test2.sqlite");
  emit_sqlite(datasets, again);
  CHECK(slurp(path) == slurp(again));
  std::filesystem::remove(path);
  std::filesystem::remove(again);
}

TEST_CASE("sqlite export rejects empty or incomplete inputs") {
  auto path = temp_file("cccgen_reject.sqlite");
  CHECK_THROWS_WITH_AS(emit_sqlite({}, path), "no languages to emit", ValidationError);

  std::map<std::string, LanguageDataset> missing;
  missing["it"] = {};
  CHECK_THROWS_WITH_AS(emit_sqlite(missing, path), "missing dataset for language it",
                       ValidationError);
  CHECK_FALSE(std::filesystem::exists(path));
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
}

TEST_CASE("summaries compute shares, mean and both median cases") {
  auto with_ccc = [](std::int64_t total, std::int64_t ccc) {
    std::vector<QualificationRecord> records(total);
    for (std::int64_t i = 0; i < total; ++i) {
      records[i].page_id = i + 1;
      records[i].ccc_binary = i < ccc ? 1 : 0;
    }
    return records;
  };
  std::vector<QualificationRecord> it = with_ccc(10, 2);   // 0.2
  std::vector<QualificationRecord> cs = with_ccc(10, 4);   // 0.4
  std::vector<QualificationRecord> de = with_ccc(10, 9);   // 0.9

  Summary odd = summarize({{"it", &it}, {"cs", &cs}, {"de", &de}});
  CHECK(odd.per_language.at("it").articles == 10);
  CHECK(odd.per_language.at("it").ccc == 2);
  CHECK(odd.per_language.at("it").share == doctest::Approx(0.2));
  CHECK(odd.mean_share == doctest::Approx(0.5));
  CHECK(odd.median_share == doctest::Approx(0.4));

  std::vector<QualificationRecord> sw = with_ccc(10, 1);   // 0.1
  Summary even = summarize({{"it", &it}, {"cs", &cs}, {"de", &de}, {"sw", &sw}});
  CHECK(even.mean_share == doctest::Approx(0.4));
  CHECK(even.median_share == doctest::Approx(0.3));  // (0.2 + 0.4) / 2

  Summary empty = summarize({{"xx", nullptr}});
  CHECK(empty.per_language.at("xx").articles == 0);
  CHECK(empty.per_language.at("xx").share == 0.0);

  nlohmann::json j = summary_to_json(even);
  CHECK(j.at("mean_ccc_share") == even.mean_share);
  CHECK(j.at("median_ccc_share") == even.median_share);
  CHECK(j.at("languages").at("it").at("articles") == 10);
  CHECK(j.at("languages").at("it").at("ccc_articles") == 2);
  CHECK(j.at("languages").at("it").at("ccc_share") == doctest::Approx(0.2));
  CHECK(j.at("languages").at("it").at("zero_articles") == false);
  nlohmann::json jz = summary_to_json(summarize({{"xx", nullptr}}));
  CHECK(jz.at("languages").at("xx").at("zero_articles") == true);
}
