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
#include <string>
#include <vector>

#include <json.hpp>

#include "ccc/features.hpp"
#include "ccc/snapshot.hpp"

namespace ccc {

inline constexpr int kDatasetColumnCount = 49;

const std::vector<std::string>& dataset_columns();

// The 49 cells for one record, in column order.
std::vector<std::string> dataset_row(const QualificationRecord& record,
                                     const WikiSnapshot& snapshot);

// Writes header plus one row per record, sorted by page_id; bzip2-compressed
// when compress is set. Returns the data row count.
std::size_t emit_csv(const std::vector<QualificationRecord>& records,
                     const WikiSnapshot& snapshot, const std::filesystem::path& path,
                     bool compress);

// Reads a dataset CSV (plain or .bz2) back into header + rows.
struct DatasetTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
DatasetTable read_dataset_csv(const std::filesystem::path& path);

struct LanguageDataset {
  const std::vector<QualificationRecord>* records = nullptr;
  const WikiSnapshot* snapshot = nullptr;
};

// One table per language, primary key page_id; the file is replaced
// atomically. Returns the table count.
std::size_t emit_sqlite(const std::map<std::string, LanguageDataset>& datasets,
                        const std::filesystem::path& path);

struct SummaryEntry {
  std::int64_t articles = 0;
  std::int64_t ccc = 0;
  double share = 0.0;
};

struct Summary {
  std::map<std::string, SummaryEntry> per_language;
  double mean_share = 0.0;
  double median_share = 0.0;
};

Summary summarize(const std::map<std::string, const std::vector<QualificationRecord>*>& records);
nlohmann::json summary_to_json(const Summary& summary);

}  // namespace ccc
