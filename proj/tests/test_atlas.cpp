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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "ccc/atlas.hpp"
#include "ccc/rng.hpp"

using namespace ccc;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path;
}

LanguageAtlas fixture_atlas() {
  return LanguageAtlas::load(std::filesystem::path(CCC_FIXTURES_DIR) / "atlas.csv");
}

// Sunday's crossing-number-free containment: nonzero winding means inside.
// Agrees with even-odd ray casting on simple polygons.
int winding_number(double lat, double lon, const Polygon& poly) {
  int wn = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    // isLeft with (lon, lat) as (x, y)
    double side =
        (b.second - a.second) * (lat - a.first) - (b.first - a.first) * (lon - a.second);
    if (a.first <= lat) {
      if (b.first > lat && side > 0) ++wn;
    } else {
      if (b.first <= lat && side < 0) --wn;
    }
  }
  return wn;
}

double point_segment_distance(double lat, double lon, const std::pair<double, double>& a,
                              const std::pair<double, double>& b) {
  double vx = b.first - a.first;
  double vy = b.second - a.second;
  double wx = lat - a.first;
  double wy = lon - a.second;
  double len2 = vx * vx + vy * vy;
  double t = len2 > 0 ? (wx * vx + wy * vy) / len2 : 0.0;
  if (t < 0) t = 0;
  if (t > 1) t = 1;
  double dx = lat - (a.first + t * vx);
  double dy = lon - (a.second + t * vy);
  return std::sqrt(dx * dx + dy * dy);
}

// Star-shaped polygon around a center: always simple, so even-odd and
// winding agree.
Polygon random_star_polygon(Rng& rng) {
  double clat = -60.0 + rng.unit() * 120.0;
  double clon = -150.0 + rng.unit() * 300.0;
  int n = 3 + static_cast<int>(rng.bounded(9));
  std::vector<double> angles;
  for (int i = 0; i < n; ++i) angles.push_back(rng.unit() * 2.0 * 3.14159265358979323846);
  std::sort(angles.begin(), angles.end());
  for (std::size_t i = 1; i < angles.size(); ++i) {
    if (angles[i] - angles[i - 1] < 1e-3) angles[i] = angles[i - 1] + 1e-3;
  }
  Polygon poly;
  for (double a : angles) {
    double r = 1.0 + rng.unit() * 8.0;
    poly.push_back({clat + r * std::sin(a), clon + r * std::cos(a)});
  }
  return poly;
}

}  // namespace

TEST_CASE("atlas loads the fixture with levels and language groups") {
  LanguageAtlas atlas = fixture_atlas();
  CHECK(atlas.has_language("it"));
  CHECK(atlas.has_language("cs"));
  CHECK(atlas.languages() == std::vector<std::string>{"cs", "de", "it"});

  const auto& territories = atlas.territories_for("it");
  REQUIRE(territories.size() == 7);
  CHECK(territories.front().qitem == "Q38");  // sorted by qitem number
  CHECK(territories.front().iso3166 == "IT");
  CHECK(territories.front().level == 1);

  const Territory* ticino = atlas.find_territory("it", "Q12724");
  REQUIRE(ticino != nullptr);
  CHECK(ticino->level == 2);
  CHECK(ticino->iso31662 == "CH-TI");

  CHECK(atlas.language_qitems("it") == std::vector<QItem>{"Q652"});
  CHECK(atlas.language_keywords("it") == std::vector<std::string>{"italian", "italiano"});

  CHECK(atlas.languages_of("Q12724") == std::set<std::string>{"de", "it"});
  CHECK(atlas.languages_of("Q38") == std::set<std::string>{"it"});
  CHECK(atlas.languages_of("Q999999").empty());

  CHECK(atlas.level_of("Q38") == 1);
  CHECK(atlas.level_of("Q12724") == 2);

  std::set<QItem> abroad = atlas.abroad_territories("it");
  CHECK(abroad.count("Q213") == 1);
  CHECK(abroad.count("Q183") == 1);
  CHECK(abroad.count("Q38") == 0);
  // Shared territory is home to both languages, so never abroad for either.
  CHECK(abroad.count("Q12724") == 0);
  CHECK(atlas.abroad_territories("de").count("Q12724") == 0);

  CHECK_THROWS_AS(atlas.territories_for("xx"), ValidationError);
}

TEST_CASE("atlas accepts the five-column form") {
  auto path = write_temp("cccgen_atlas5.csv",
                         "language,qitem,iso3166,iso31662,keywords\n"
                         "it,Q38,IT,,italia;italy\n");
  LanguageAtlas atlas = LanguageAtlas::load(path);
  CHECK(atlas.territories_for("it").size() == 1);
  CHECK(atlas.language_qitems("it").empty());
  std::filesystem::remove(path);
}

TEST_CASE("atlas rejects malformed rows with the line number") {
  struct Case {
    const char* name;
    const char* row;
    const char* needle;
  };
  const Case cases[] = {
      {"bad qitem", "it,X38,IT,,italia,Q652,italian\n", ":2"},
      {"bad iso", "it,Q38,ITA,,italia,Q652,italian\n", ":2"},
      {"empty keywords", "it,Q38,IT,,,Q652,italian\n", ":2"},
      {"bad language qitem", "it,Q38,IT,,italia,x,italian\n", ":2"},
  };
  for (const Case& c : cases) {
    CAPTURE(c.name);
    auto path = write_temp("cccgen_atlas_bad.csv",
                           std::string("language,qitem,iso3166,iso31662,keywords,"
                                       "language_qitems,language_keywords\n") +
                               c.row);
    try {
      LanguageAtlas::load(path);
      FAIL("expected ValidationError for ", c.name);
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find(c.needle) != std::string::npos);
    }
    std::filesystem::remove(path);
  }

  auto dup = write_temp("cccgen_atlas_dup.csv",
                        "language,qitem,iso3166,iso31662,keywords\n"
                        "it,Q38,IT,,italia\n"
                        "it,Q38,IT,,italy\n");
  CHECK_THROWS_AS(LanguageAtlas::load(dup), ValidationError);
  std::filesystem::remove(dup);

  auto inconsistent = write_temp("cccgen_atlas_inc.csv",
                                 "language,qitem,iso3166,iso31662,keywords,language_qitems,"
                                 "language_keywords\n"
                                 "it,Q38,IT,,italia,Q652,italian\n"
                                 "it,Q237,VA,,vaticano,Q999,italian\n");
  CHECK_THROWS_AS(LanguageAtlas::load(inconsistent), ValidationError);
  std::filesystem::remove(inconsistent);

  auto empty = write_temp("cccgen_atlas_empty.csv",
                          "language,qitem,iso3166,iso31662,keywords\n");
  CHECK_THROWS_AS(LanguageAtlas::load(empty), ValidationError);
  std::filesystem::remove(empty);
}

TEST_CASE("lexicon matches the longest keyword and merges owners") {
  LanguageAtlas atlas = fixture_atlas();
  Lexicon lexicon = Lexicon::for_language(atlas, "it");

  auto match = lexicon.match_title("Italian_cheeses");
  REQUIRE(match.has_value());
  CHECK(match->keyword == "italian");
  REQUIRE(match->owners.size() == 2);
  CHECK(match->owners[0] == LexiconOwner{"Q38", false});
  CHECK(match->owners[1] == LexiconOwner{"Q652", true});

  // "san marino" has two tokens and outranks any single-token keyword.
  auto longest = lexicon.match_title("History_of_San_Marino_italian_community");
  REQUIRE(longest.has_value());
  CHECK(longest->keyword == "san marino");
  CHECK(longest->owners == std::vector<LexiconOwner>{{"Q238", false}});

  CHECK_FALSE(lexicon.match_title("Plain_article").has_value());
  CHECK_FALSE(lexicon.match_title("").has_value());

  // Earlier match wins between equal-length keywords.
  auto earlier = lexicon.match_title("Ticino_and_Istria");
  REQUIRE(earlier.has_value());
  CHECK(earlier->keyword == "ticino");
}

TEST_CASE("point_in_polygon counts boundary as contained") {
  Polygon box = {{0.0, 0.0}, {0.0, 10.0}, {10.0, 10.0}, {10.0, 0.0}};
  CHECK(point_in_polygon(5.0, 5.0, box));
  CHECK_FALSE(point_in_polygon(15.0, 5.0, box));
  CHECK_FALSE(point_in_polygon(-0.001, 5.0, box));
  CHECK(point_in_polygon(0.0, 5.0, box));    // edge
  CHECK(point_in_polygon(0.0, 0.0, box));    // vertex
  CHECK(point_in_polygon(10.0, 10.0, box));  // far vertex
  const Polygon triangle = {{0.0, 0.0}, {4.0, 8.0}, {8.0, 0.0}};
  CHECK(point_in_polygon(2.0, 4.0, triangle));
  CHECK_FALSE(point_in_polygon(6.0, 7.0, triangle));
  CHECK(point_in_polygon(2.0, 4.0, triangle));
}

TEST_CASE("ray casting agrees with a winding-number oracle") {
  Rng rng(0xA71A5);
  int checked = 0;
  while (checked < 1000) {
    Polygon poly = random_star_polygon(rng);
    double lat = -90.0 + rng.unit() * 180.0;
    double lon = -180.0 + rng.unit() * 360.0;
    bool near_edge = false;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      if (point_segment_distance(lat, lon, poly[i], poly[(i + 1) % poly.size()]) < 1e-6) {
        near_edge = true;
        break;
      }
    }
    if (near_edge) continue;
    bool oracle = winding_number(lat, lon, poly) != 0;
    CHECK(point_in_polygon(lat, lon, poly) == oracle);
    ++checked;
  }
}

TEST_CASE("boundaries load, validate and probe regions before countries") {
  LanguageAtlas atlas = fixture_atlas();
  BoundarySet boundaries =
      BoundarySet::load(std::filesystem::path(CCC_FIXTURES_DIR) / "boundaries.jsonl", &atlas);
  REQUIRE(boundaries.entries().size() == 2);

  CHECK(reverse_geocode(42.0, 12.0, boundaries) == QItem("Q38"));
  CHECK(reverse_geocode(49.5, 15.0, boundaries) == QItem("Q213"));
  CHECK_FALSE(reverse_geocode(0.0, 0.0, boundaries).has_value());

  // A level-2 box overlapping Q38 must win inside the overlap.
  BoundaryEntry region;
  region.qitem = "Q12724";
  region.level = atlas.level_of("Q12724");
  region.polygons = {{{40.0, 8.0}, {40.0, 10.0}, {43.0, 10.0}, {43.0, 8.0}}};
  boundaries.add(region);
  CHECK(boundaries.entries().front().qitem == "Q12724");
  CHECK(reverse_geocode(41.0, 9.0, boundaries) == QItem("Q12724"));
  CHECK(reverse_geocode(41.0, 12.0, boundaries) == QItem("Q38"));

  auto bad = write_temp("cccgen_bounds_bad.jsonl",
                        "{\"qitem\":\"Q1\",\"polygons\":[[[95.0,0.0],[0.0,1.0],[1.0,1.0]]]}\n");
  CHECK_THROWS_AS(BoundarySet::load(bad), ValidationError);
  std::filesystem::remove(bad);

  auto degenerate = write_temp("cccgen_bounds_two.jsonl",
                               "{\"qitem\":\"Q1\",\"polygons\":[[[0.0,0.0],[1.0,1.0]]]}\n");
  CHECK_THROWS_AS(BoundarySet::load(degenerate), ValidationError);
  std::filesystem::remove(degenerate);
}
