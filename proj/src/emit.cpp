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

#include "ccc/emit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <boost/iostreams/filter/bzip2.hpp>
#include <boost/iostreams/filtering_stream.hpp>
#include <sqlite3.h>

#include "ccc/csv.hpp"

namespace ccc {

namespace {

std::string format_count(std::int64_t v) { return std::to_string(v); }

std::string format_percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string join_evidence(const std::vector<EvidencePair>& pairs) {
  std::string out;
  for (const auto& p : pairs) {
    if (!out.empty()) out.push_back(';');
    out += p.property;
    out.push_back(':');
    out += p.value;
  }
  return out;
}

std::string join_qitems(const std::vector<QItem>& qitems) {
  std::string out;
  for (const auto& q : qitems) {
    if (!out.empty()) out.push_back(';');
    out += q;
  }
  return out;
}

void check_percent(const QualificationRecord& r, double percent, std::int64_t count,
                   std::int64_t total, const char* column) {
  double expected = total > 0 ? static_cast<double>(count) / total : 0.0;
  if (std::abs(percent - expected) > 1e-6) {
    throw ValidationError("page " + std::to_string(r.page_id) + ": " + column +
                          " does not match its counts");
  }
}

}  // namespace

const std::vector<std::string>& dataset_columns() {
  static const std::vector<std::string> kColumns = {
      "qitem",
      "page_id",
      "page_title",
      "date_created",
      "geocoordinates",
      "iso3166",
      "iso31662",
      "ccc_binary",
      "main_territory",
      "num_retrieval_strategies",
      "ccc_geolocated",
      "country_wd",
      "location_wd",
      "language_strong_wd",
      "created_by_wd",
      "part_of_wd",
      "keyword_title",
      "category_crawling_territories",
      "category_crawling_level",
      "language_weak_wd",
      "affiliation_wd",
      "has_part_wd",
      "num_inlinks_from_CCC",
      "num_outlinks_to_CCC",
      "percent_inlinks_from_CCC",
      "percent_outlinks_to_CCC",
      "other_ccc_country_wd",
      "other_ccc_location_wd",
      "other_ccc_language_strong_wd",
      "other_ccc_created_by_wd",
      "other_ccc_part_of_wd",
      "other_ccc_language_weak_wd",
      "other_ccc_affiliation_wd",
      "other_ccc_has_part_wd",
      "num_inlinks_from_geolocated_abroad",
      "num_outlinks_to_geolocated_abroad",
      "percent_inlinks_from_geolocated_abroad",
      "percent_outlinks_to_geolocated_abroad",
      "num_inlinks",
      "num_outlinks",
      "num_bytes",
      "num_references",
      "num_edits",
      "num_editors",
      "num_discussions",
      "num_pageviews",
      "num_wdproperty",
      "num_interwiki",
      "featured_article",
  };
  return kColumns;
}

std::vector<std::string> dataset_row(const QualificationRecord& r, const WikiSnapshot& snapshot) {
  if (r.ccc_binary != 0 && r.ccc_binary != 1) {
    throw ValidationError("page " + std::to_string(r.page_id) + ": ccc_binary out of range");
  }
  const PageRecord& page = snapshot.page(r.page_id);
  const std::int64_t num_inlinks = static_cast<std::int64_t>(snapshot.inlinks(r.page_id).size());
  const std::int64_t num_outlinks = static_cast<std::int64_t>(snapshot.outlinks(r.page_id).size());

  check_percent(r, r.percent_inlinks_from_ccc, r.inlinks_from_ccc, num_inlinks,
                "percent_inlinks_from_CCC");
  check_percent(r, r.percent_outlinks_to_ccc, r.outlinks_to_ccc, num_outlinks,
                "percent_outlinks_to_CCC");
  check_percent(r, r.percent_inlinks_from_abroad, r.inlinks_from_abroad, num_inlinks,
                "percent_inlinks_from_geolocated_abroad");
  check_percent(r, r.percent_outlinks_to_abroad, r.outlinks_to_abroad, num_outlinks,
                "percent_outlinks_to_geolocated_abroad");

  const WikidataEntity* entity = r.qitem.empty() ? nullptr : snapshot.entity(r.qitem);

  std::vector<std::string> row;
  row.reserve(kDatasetColumnCount);
  row.push_back(r.qitem);
  row.push_back(format_count(r.page_id));
  row.push_back(r.page_title);
  row.push_back(format_count(r.date_created));
  row.push_back(r.has_geotag ? format_double(r.lat) + ";" + format_double(r.lon) : "");
  row.push_back(r.iso3166);
  row.push_back(r.iso31662);
  row.push_back(format_count(r.ccc_binary));
  row.push_back(r.main_territory);
  row.push_back(format_count(r.num_retrieval_strategies));
  row.push_back(r.ccc_geolocated == 0 ? "" : format_count(r.ccc_geolocated));
  row.push_back(join_evidence(r.group_evidence(PropertyGroup::Country)));
  row.push_back(join_evidence(r.group_evidence(PropertyGroup::Location)));
  row.push_back(join_evidence(r.group_evidence(PropertyGroup::LanguageStrong)));
  row.push_back(join_evidence(r.group_evidence(PropertyGroup::CreatedBy)));
  row.push_back(join_evidence(r.group_evidence(PropertyGroup::PartOf)));
  row.push_back(r.keyword_title);
  row.push_back(join_qitems(r.crawl.territories));
  row.push_back(r.crawl.level == -1 ? "" : format_count(r.crawl.level));
  row.push_back(join_evidence(r.group_evidence(PropertyGroup::LanguageWeak)));
  row.push_back(join_evidence(r.group_evidence(PropertyGroup::Affiliation)));
  row.push_back(join_evidence(r.group_evidence(PropertyGroup::HasPart)));
  row.push_back(format_count(r.inlinks_from_ccc));
  row.push_back(format_count(r.outlinks_to_ccc));
  row.push_back(format_percent(r.percent_inlinks_from_ccc));
  row.push_back(format_percent(r.percent_outlinks_to_ccc));
  row.push_back(join_evidence(r.group_other(PropertyGroup::Country)));
  row.push_back(join_evidence(r.group_other(PropertyGroup::Location)));
  row.push_back(join_evidence(r.group_other(PropertyGroup::LanguageStrong)));
  row.push_back(join_evidence(r.group_other(PropertyGroup::CreatedBy)));
  row.push_back(join_evidence(r.group_other(PropertyGroup::PartOf)));
  row.push_back(join_evidence(r.group_other(PropertyGroup::LanguageWeak)));
  row.push_back(join_evidence(r.group_other(PropertyGroup::Affiliation)));
  row.push_back(join_evidence(r.group_other(PropertyGroup::HasPart)));
  row.push_back(format_count(r.inlinks_from_abroad));
  row.push_back(format_count(r.outlinks_to_abroad));
  row.push_back(format_percent(r.percent_inlinks_from_abroad));
  row.push_back(format_percent(r.percent_outlinks_to_abroad));
  row.push_back(format_count(num_inlinks));
  row.push_back(format_count(num_outlinks));
  row.push_back(format_count(page.metrics.num_bytes));
  row.push_back(format_count(page.metrics.num_references));
  row.push_back(format_count(page.metrics.num_edits));
  row.push_back(format_count(page.metrics.num_editors));
  row.push_back(format_count(page.metrics.num_discussions));
  row.push_back(format_count(page.metrics.num_pageviews));
  row.push_back(format_count(entity ? snapshot.wdproperty_count(r.qitem) : 0));
  row.push_back(format_count(entity ? snapshot.interwiki_count(r.qitem) : 0));
  row.push_back(page.metrics.featured_article ? "1" : "");
  return row;
}

std::size_t emit_csv(const std::vector<QualificationRecord>& records,
                     const WikiSnapshot& snapshot, const std::filesystem::path& path,
                     bool compress) {
  std::vector<const QualificationRecord*> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](const QualificationRecord* a, const QualificationRecord* b) {
              return a->page_id < b->page_id;
            });

  std::ofstream file(path, std::ios::binary);
  if (!file) throw ValidationError("cannot write " + path.string());
  boost::iostreams::filtering_ostream out;
  if (compress) out.push(boost::iostreams::bzip2_compressor());
  out.push(file);

  out << csv::join_row(dataset_columns());
  std::size_t count = 0;
  for (const QualificationRecord* r : sorted) {
    out << csv::join_row(dataset_row(*r, snapshot));
    ++count;
  }
  out.reset();  // flush the compressor before the ofstream closes
  if (!file) throw ValidationError("write failed for " + path.string());
  return count;
}

DatasetTable read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw ValidationError("cannot open " + path.string());
  boost::iostreams::filtering_istream in;
  if (path.extension() == ".bz2") in.push(boost::iostreams::bzip2_decompressor());
  in.push(file);

  // Decompressed CSV arrives through the filter chain, so read it all before
  // handing it to the row parser.
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::istringstream text(buffer.str());

  DatasetTable table;
  csv::Reader reader(text);
  if (!reader.next(table.header)) {
    throw ValidationError(path.string() + ": empty dataset");
  }
  std::vector<std::string> row;
  while (reader.next(row)) {
    if (row.size() != table.header.size()) {
      throw ValidationError(path.string() + ":" + std::to_string(reader.line()) +
                            ": wrong column count");
    }
    table.rows.push_back(row);
  }
  return table;
}

namespace {

void sqlite_check(int rc, sqlite3* db, const std::string& context) {
  if (rc != SQLITE_OK && rc != SQLITE_DONE && rc != SQLITE_ROW) {
    std::string msg = context + ": " + (db ? sqlite3_errmsg(db) : "sqlite error");
    throw ValidationError(msg);
  }
}

}  // namespace

std::size_t emit_sqlite(const std::map<std::string, LanguageDataset>& datasets,
                        const std::filesystem::path& path) {
  if (datasets.empty()) throw ValidationError("no languages to emit");

  const std::filesystem::path tmp = path.string() + ".tmp";
  std::filesystem::remove(tmp);

  sqlite3* db = nullptr;
  int rc = sqlite3_open(tmp.string().c_str(), &db);
  if (rc != SQLITE_OK) {
    std::string msg = db ? sqlite3_errmsg(db) : "cannot open database";
    sqlite3_close(db);
    throw ValidationError(path.string() + ": " + msg);
  }

  try {
    sqlite_check(sqlite3_exec(db, "BEGIN", nullptr, nullptr, nullptr), db, "begin");

    for (const auto& [language, dataset] : datasets) {
      if (!dataset.records || !dataset.snapshot) {
        throw ValidationError("missing dataset for language " + language);
      }
      std::string create = "CREATE TABLE \"" + language + "\" (";
      std::string insert = "INSERT INTO \"" + language + "\" VALUES (";
      const auto& columns = dataset_columns();
      for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) {
          create += ", ";
          insert += ", ";
        }
        create += "\"" + columns[i] + "\" ";
        create += columns[i] == "page_id" ? "INTEGER PRIMARY KEY" : "TEXT";
        insert += "?";
      }
      create += ")";
      insert += ")";
      sqlite_check(sqlite3_exec(db, create.c_str(), nullptr, nullptr, nullptr), db,
                   "create table " + language);

      sqlite3_stmt* stmt = nullptr;
      sqlite_check(sqlite3_prepare_v2(db, insert.c_str(), -1, &stmt, nullptr), db,
                   "prepare insert " + language);

      std::vector<const QualificationRecord*> sorted;
      for (const auto& r : *dataset.records) sorted.push_back(&r);
      std::sort(sorted.begin(), sorted.end(),
                [](const QualificationRecord* a, const QualificationRecord* b) {
                  return a->page_id < b->page_id;
                });
      for (const QualificationRecord* r : sorted) {
        std::vector<std::string> row = dataset_row(*r, *dataset.snapshot);
        for (std::size_t i = 0; i < row.size(); ++i) {
          if (columns[i] == "page_id") {
            sqlite3_bind_int64(stmt, static_cast<int>(i + 1), r->page_id);
          } else {
            sqlite3_bind_text(stmt, static_cast<int>(i + 1), row[i].c_str(),
                              static_cast<int>(row[i].size()), SQLITE_TRANSIENT);
          }
        }
        rc = sqlite3_step(stmt);
        if (rc != SQLITE_DONE) {
          sqlite3_finalize(stmt);
          sqlite_check(rc, db, "insert into " + language);
        }
        sqlite3_reset(stmt);
      }
      sqlite3_finalize(stmt);
    }

    sqlite_check(sqlite3_exec(db, "COMMIT", nullptr, nullptr, nullptr), db, "commit");
  } catch (...) {
    sqlite3_close(db);
    std::filesystem::remove(tmp);
    throw;
  }
  sqlite3_close(db);
  std::filesystem::rename(tmp, path);
  return datasets.size();
}

Summary summarize(const std::map<std::string, const std::vector<QualificationRecord>*>& records) {
  Summary summary;
  std::vector<double> shares;
  for (const auto& [language, recs] : records) {
    SummaryEntry entry;
    if (recs) {
      entry.articles = static_cast<std::int64_t>(recs->size());
      for (const auto& r : *recs) entry.ccc += r.ccc_binary == 1;
    }
    entry.share = entry.articles ? static_cast<double>(entry.ccc) / entry.articles : 0.0;
    shares.push_back(entry.share);
    summary.per_language.emplace(language, entry);
  }
  if (!shares.empty()) {
    double total = 0.0;
    for (double s : shares) total += s;
    summary.mean_share = total / shares.size();
    std::sort(shares.begin(), shares.end());
    std::size_t mid = shares.size() / 2;
    summary.median_share =
        shares.size() % 2 ? shares[mid] : (shares[mid - 1] + shares[mid]) / 2.0;
  }
  return summary;
}

nlohmann::json summary_to_json(const Summary& summary) {
  nlohmann::json per_language;
  for (const auto& [language, entry] : summary.per_language) {
    per_language[language] = {{"articles", entry.articles},
                              {"ccc_articles", entry.ccc},
                              {"ccc_share", entry.share},
                              {"zero_articles", entry.articles == 0}};
  }
  return {{"languages", per_language},
          {"mean_ccc_share", summary.mean_share},
          {"median_ccc_share", summary.median_share}};
}

}  // namespace ccc
