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

#include "ccc/toplists.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "ccc/csv.hpp"

namespace ccc {

namespace {

const std::set<std::string>& ranking_features() {
  static const std::set<std::string> kFeatures = {
      "editors",  "pageviews",        "edits",        "bytes",
      "references", "discussions",    "inlinks_from_CCC", "date_created",
  };
  return kFeatures;
}

void validate_spec(const RankingSpec& spec) {
  if (spec.components.empty()) throw ValidationError("ranking needs at least one feature");
  double total = 0.0;
  for (const auto& c : spec.components) {
    if (!ranking_features().count(c.feature)) {
      throw ValidationError("unknown ranking feature \"" + c.feature + "\"");
    }
    if (c.weight < 0.0) throw ValidationError("ranking weights must be non-negative");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("ranking weights must sum to 1");
  }
}

double feature_value(const std::string& name, const QualificationRecord& r,
                     const PageRecord& page) {
  if (name == "editors") return static_cast<double>(page.metrics.num_editors);
  if (name == "pageviews") return static_cast<double>(page.metrics.num_pageviews);
  if (name == "edits") return static_cast<double>(page.metrics.num_edits);
  if (name == "bytes") return static_cast<double>(page.metrics.num_bytes);
  if (name == "references") return static_cast<double>(page.metrics.num_references);
  if (name == "discussions") return static_cast<double>(page.metrics.num_discussions);
  if (name == "inlinks_from_CCC") return static_cast<double>(r.inlinks_from_ccc);
  if (name == "date_created") return static_cast<double>(r.date_created);
  throw ValidationError("unknown ranking feature \"" + name + "\"");
}

bool passes(const SegmentFilter& filter, const QualificationRecord& r,
            const WikiSnapshot& snapshot) {
  if (filter.geolocated_only && !r.has_geotag) return false;
  if (filter.keyword_title_only && r.keyword_title.empty()) return false;
  if (filter.date_min && r.date_created < *filter.date_min) return false;
  if (filter.date_max && r.date_created > *filter.date_max) return false;
  if (filter.origin_territory && r.main_territory != *filter.origin_territory) return false;
  if (filter.gender) {
    const WikidataEntity* entity = r.qitem.empty() ? nullptr : snapshot.entity(r.qitem);
    if (!entity) return false;
    auto claim = entity->claims.find("P21");
    if (claim == entity->claims.end()) return false;
    if (std::find(claim->second.begin(), claim->second.end(), *filter.gender) ==
        claim->second.end()) {
      return false;
    }
  }
  return true;
}

std::string format_number(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    return std::to_string(static_cast<std::int64_t>(v));
  }
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string html_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

void write_html_table(std::ofstream& out, const std::string& title,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  out << "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>"
      << html_escape(title) << "</title>\n"
      << "<style>table{border-collapse:collapse}td,th{border:1px solid #999;"
         "padding:2px 6px;text-align:left}</style>\n</head>\n<body>\n<table>\n<tr>";
  for (const auto& cell : header) out << "<th>" << html_escape(cell) << "</th>";
  out << "</tr>\n";
  for (const auto& row : rows) {
    out << "<tr>";
    for (const auto& cell : row) out << "<td>" << html_escape(cell) << "</td>";
    out << "</tr>\n";
  }
  out << "</table>\n</body>\n</html>\n";
}

std::vector<std::string> list_header(const TopList& list) {
  std::vector<std::string> header = {"rank", "page_id", "qitem", "page_title"};
  header.insert(header.end(), list.feature_names.begin(), list.feature_names.end());
  header.push_back("score");
  header.push_back("main_territory");
  header.push_back("availability");
  return header;
}

std::vector<std::string> list_row_cells(const TopListRow& row) {
  std::vector<std::string> cells = {std::to_string(row.rank), std::to_string(row.page_id),
                                    row.qitem, row.page_title};
  for (double v : row.features) cells.push_back(format_number(v));
  cells.push_back(format_number(row.score));
  cells.push_back(row.main_territory);
  cells.push_back(row.availability);
  return cells;
}

// YYYYMMDD plus n years, clamping Feb 29 when the target year is not leap.
std::int64_t add_years(std::int64_t date, int years) {
  std::int64_t year = date / 10000 + years;
  std::int64_t month = date / 100 % 100;
  std::int64_t day = date % 100;
  bool leap = year % 4 == 0 && (year % 100 != 0 || year % 400 == 0);
  if (month == 2 && day == 29 && !leap) day = 28;
  return year * 10000 + month * 100 + day;
}

}  // namespace

TopList generate_top_list(const std::vector<QualificationRecord>& records,
                          const WikiSnapshot& snapshot, const RankingSpec& spec,
                          const SegmentFilter& filter, const std::string& target, int limit) {
  validate_spec(spec);
  if (limit <= 0) throw ValidationError("list limit must be positive");

  TopList list;
  list.origin = snapshot.language();
  list.target = target;
  list.ascending = spec.ascending;
  for (const auto& c : spec.components) list.feature_names.push_back(c.feature);

  std::vector<TopListRow> candidates;
  for (const auto& r : records) {
    if (r.ccc_binary != 1) continue;
    if (!passes(filter, r, snapshot)) continue;
    TopListRow row;
    row.page_id = r.page_id;
    row.qitem = r.qitem;
    row.page_title = r.page_title;
    row.main_territory = r.main_territory;
    const PageRecord& page = snapshot.page(r.page_id);
    for (const auto& c : spec.components) {
      row.features.push_back(feature_value(c.feature, r, page));
    }
    row.availability = kMissingMarker;
    if (const WikidataEntity* entity = r.qitem.empty() ? nullptr : snapshot.entity(r.qitem)) {
      auto link = entity->sitelinks.find(target + "wiki");
      if (link != entity->sitelinks.end()) row.availability = link->second;
    }
    candidates.push_back(std::move(row));
  }

  if (spec.components.size() == 1) {
    for (auto& row : candidates) row.score = row.features[0];
  } else {
    // Min-max normalize each feature over the candidate set, then mix.
    const std::size_t k = spec.components.size();
    std::vector<double> lo(k, 0.0);
    std::vector<double> hi(k, 0.0);
    for (std::size_t f = 0; f < k; ++f) {
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        double v = candidates[i].features[f];
        if (i == 0 || v < lo[f]) lo[f] = v;
        if (i == 0 || v > hi[f]) hi[f] = v;
      }
    }
    for (auto& row : candidates) {
      row.score = 0.0;
      for (std::size_t f = 0; f < k; ++f) {
        double span = hi[f] - lo[f];
        double scaled = span > 0.0 ? (row.features[f] - lo[f]) / span : 0.0;
        row.score += spec.components[f].weight * scaled;
      }
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [&](const TopListRow& a, const TopListRow& b) {
              if (a.score != b.score) {
                return spec.ascending ? a.score < b.score : a.score > b.score;
              }
              if (id_number(a.qitem) != id_number(b.qitem)) {
                return id_number(a.qitem) < id_number(b.qitem);
              }
              return a.page_id < b.page_id;
            });
  if (static_cast<int>(candidates.size()) > limit) candidates.resize(limit);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    candidates[i].rank = static_cast<int>(i + 1);
  }
  list.rows = std::move(candidates);
  return list;
}

std::vector<CoverageCell> coverage_overview(const std::vector<TopList>& lists) {
  std::map<std::pair<std::string, std::string>, CoverageCell> cells;
  for (const auto& list : lists) {
    CoverageCell& cell = cells[{list.origin, list.target}];
    cell.origin = list.origin;
    cell.target = list.target;
    cell.rows += static_cast<std::int64_t>(list.rows.size());
    for (const auto& row : list.rows) cell.available += row.availability != kMissingMarker;
  }
  std::vector<CoverageCell> out;
  for (auto& [key, cell] : cells) {
    cell.has_data = cell.rows > 0;
    cell.share = cell.has_data ? static_cast<double>(cell.available) / cell.rows : 0.0;
    out.push_back(cell);
  }
  return out;
}

TableFormat table_format_from_string(const std::string& name) {
  if (name == "csv") return TableFormat::Csv;
  if (name == "html") return TableFormat::Html;
  throw ValidationError("unknown table format \"" + name + "\"");
}

void render_table(const TopList& list, TableFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  std::vector<std::string> header = list_header(list);
  std::vector<std::vector<std::string>> rows;
  rows.reserve(list.rows.size());
  for (const auto& row : list.rows) rows.push_back(list_row_cells(row));
  if (format == TableFormat::Csv) {
    out << csv::join_row(header);
    for (const auto& row : rows) out << csv::join_row(row);
  } else {
    write_html_table(out, "Top CCC articles: " + list.origin + " to " + list.target, header,
                     rows);
  }
  if (!out) throw ValidationError("write failed for " + path.string());
}

void render_table(const std::vector<CoverageCell>& matrix, TableFormat format,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  std::vector<std::string> header = {"origin", "target", "rows", "available", "share"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& cell : matrix) {
    rows.push_back({cell.origin, cell.target, std::to_string(cell.rows),
                    std::to_string(cell.available),
                    cell.has_data ? format_number(cell.share) : "no-data"});
  }
  if (format == TableFormat::Csv) {
    out << csv::join_row(header);
    for (const auto& row : rows) out << csv::join_row(row);
  } else {
    write_html_table(out, "CCC coverage overview", header, rows);
  }
  if (!out) throw ValidationError("write failed for " + path.string());
}

std::vector<ListPreset> default_presets(std::int64_t wiki_start_date,
                                        std::int64_t reference_date, const QItem& women_qitem,
                                        const QItem& men_qitem) {
  std::vector<ListPreset> presets;

  auto simple = [](std::string name, std::string feature) {
    ListPreset p;
    p.name = std::move(name);
    p.spec.components.push_back({std::move(feature), 1.0});
    return p;
  };

  presets.push_back(simple("top_editors", "editors"));
  presets.push_back(simple("top_pageviews", "pageviews"));
  presets.push_back(simple("top_discussions", "discussions"));

  ListPreset relevance;
  relevance.name = "top_relevance";
  relevance.spec.components = {{"bytes", 0.6}, {"references", 0.3}, {"editors", 0.1}};
  presets.push_back(relevance);

  ListPreset women = simple("top_women", "editors");
  women.filter.gender = women_qitem;
  presets.push_back(women);

  ListPreset men = simple("top_men", "editors");
  men.filter.gender = men_qitem;
  presets.push_back(men);

  ListPreset geolocated = simple("top_geolocated", "pageviews");
  geolocated.filter.geolocated_only = true;
  presets.push_back(geolocated);

  ListPreset first3;
  first3.name = "created_first_3_years";
  first3.spec.components.push_back({"date_created", 1.0});
  first3.spec.ascending = true;
  first3.filter.date_min = wiki_start_date;
  first3.filter.date_max = add_years(wiki_start_date, 3);
  presets.push_back(first3);

  ListPreset lasty;
  lasty.name = "created_last_year";
  lasty.spec.components.push_back({"date_created", 1.0});
  lasty.filter.date_min = add_years(reference_date, -1);
  lasty.filter.date_max = reference_date;
  presets.push_back(lasty);

  return presets;
}

ListPreset list_preset_from_json(const nlohmann::json& spec) {
  if (!spec.is_object()) throw ValidationError("list spec must be a JSON object");
  ListPreset preset;
  preset.name = spec.value("name", std::string("custom"));
  if (!spec.contains("ranking") || !spec["ranking"].is_object()) {
    throw ValidationError("list spec needs a \"ranking\" object");
  }
  const nlohmann::json& ranking = spec["ranking"];
  if (!ranking.contains("features") || !ranking["features"].is_array() ||
      ranking["features"].empty()) {
    throw ValidationError("list spec ranking needs a non-empty \"features\" array");
  }
  for (const auto& item : ranking["features"]) {
    RankingComponent component;
    if (item.is_string()) {
      component.feature = item.get<std::string>();
      component.weight = 1.0;
    } else if (item.is_object()) {
      if (!item.contains("feature")) throw ValidationError("ranking entry needs a feature name");
      component.feature = item["feature"].get<std::string>();
      component.weight = item.value("weight", 1.0);
    } else {
      throw ValidationError("ranking entries must be names or {feature, weight} objects");
    }
    preset.spec.components.push_back(component);
  }
  preset.spec.ascending = ranking.value("ascending", false);
  if (spec.contains("filter")) {
    const nlohmann::json& filter = spec["filter"];
    if (!filter.is_object()) throw ValidationError("list spec filter must be an object");
    if (filter.contains("gender")) preset.filter.gender = filter["gender"].get<std::string>();
    preset.filter.geolocated_only = filter.value("geolocated_only", false);
    preset.filter.keyword_title_only = filter.value("keyword_title_only", false);
    if (filter.contains("date_min")) {
      preset.filter.date_min = filter["date_min"].get<std::int64_t>();
    }
    if (filter.contains("date_max")) {
      preset.filter.date_max = filter["date_max"].get<std::int64_t>();
    }
    if (filter.contains("origin_territory")) {
      preset.filter.origin_territory = filter["origin_territory"].get<std::string>();
    }
  }
  preset.limit = spec.value("limit", kDefaultListLimit);
  if (preset.limit <= 0) throw ValidationError("list limit must be positive");
  return preset;
}

}  // namespace ccc
