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

#include "ccc/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "ccc/csv.hpp"
#include "ccc/rng.hpp"

namespace ccc {

namespace {

void validate_vector(const LabelVector& v) {
  if (v.labels.empty()) throw ValidationError("empty label vector");
  std::unordered_set<PageId> seen;
  for (const auto& [page, label] : v.labels) {
    if (label != 0 && label != 1) {
      throw ValidationError("label for page " + std::to_string(page) + " is not 0 or 1");
    }
    if (!seen.insert(page).second) {
      throw ValidationError("duplicate page " + std::to_string(page) + " in label vector");
    }
  }
}

void validate_aligned(const LabelVector& a, const LabelVector& b) {
  validate_vector(a);
  validate_vector(b);
  if (a.labels.size() != b.labels.size()) {
    throw ValidationError("label vectors have different lengths");
  }
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    if (a.labels[i].first != b.labels[i].first) {
      throw ValidationError("label vectors disagree on page order at position " +
                            std::to_string(i));
    }
  }
}

// First n of a seeded shuffle, returned in page order.
std::vector<PageId> draw(std::vector<PageId>& pool, int n, Rng& rng) {
  for (int i = 0; i < n; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.bounded(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  std::vector<PageId> picked(pool.begin(), pool.begin() + n);
  std::sort(picked.begin(), picked.end());
  return picked;
}

}  // namespace

std::vector<PageId> sample_for_assessment(const std::vector<QualificationRecord>& records,
                                          int n_pos, int n_neg, std::uint64_t seed) {
  if (n_pos <= 0 || n_neg <= 0) throw ValidationError("sample sizes must be positive");
  std::vector<PageId> positives;
  std::vector<PageId> negatives;
  for (const auto& r : records) {
    (r.ccc_binary == 1 ? positives : negatives).push_back(r.page_id);
  }
  if (static_cast<int>(positives.size()) < n_pos) {
    throw ValidationError("need " + std::to_string(n_pos) + " positive articles, have " +
                          std::to_string(positives.size()));
  }
  if (static_cast<int>(negatives.size()) < n_neg) {
    throw ValidationError("need " + std::to_string(n_neg) + " negative articles, have " +
                          std::to_string(negatives.size()));
  }
  std::sort(positives.begin(), positives.end());
  std::sort(negatives.begin(), negatives.end());

  Rng rng(seed);
  std::vector<PageId> sample = draw(positives, n_pos, rng);
  std::vector<PageId> neg = draw(negatives, n_neg, rng);
  sample.insert(sample.end(), neg.begin(), neg.end());
  return sample;
}

LabelVector labels_from_records(const std::vector<QualificationRecord>& records,
                                const std::vector<PageId>& ids, const std::string& rater) {
  std::unordered_map<PageId, int> by_page;
  for (const auto& r : records) by_page.emplace(r.page_id, r.ccc_binary);
  LabelVector out;
  out.rater = rater;
  out.labels.reserve(ids.size());
  for (PageId id : ids) {
    auto it = by_page.find(id);
    if (it == by_page.end()) {
      throw ValidationError("page " + std::to_string(id) + " not present in records");
    }
    out.labels.emplace_back(id, it->second);
  }
  validate_vector(out);
  return out;
}

LabelVector read_labels_csv(const std::filesystem::path& path, const std::string& rater) {
  std::ifstream file(path);
  if (!file) throw ValidationError("cannot open " + path.string());
  csv::Reader reader(file);
  std::vector<std::string> row;
  if (!reader.next(row) || row.size() != 2 || row[0] != "page_id" || row[1] != "label") {
    throw ValidationError(path.string() + ": expected header page_id,label");
  }
  LabelVector out;
  out.rater = rater;
  while (reader.next(row)) {
    if (row.size() != 2) {
      throw ValidationError(path.string() + ":" + std::to_string(reader.line()) +
                            ": expected two cells");
    }
    PageId page = 0;
    int label = -1;
    try {
      page = std::stoll(row[0]);
      label = std::stoi(row[1]);
    } catch (const std::exception&) {
      throw ValidationError(path.string() + ":" + std::to_string(reader.line()) +
                            ": malformed row");
    }
    out.labels.emplace_back(page, label);
  }
  validate_vector(out);
  return out;
}

AgreementReport cohens_kappa(const LabelVector& a, const LabelVector& b) {
  validate_aligned(a, b);
  const double n = static_cast<double>(a.labels.size());
  std::int64_t equal = 0;
  std::int64_t a_pos = 0;
  std::int64_t b_pos = 0;
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    equal += a.labels[i].second == b.labels[i].second;
    a_pos += a.labels[i].second;
    b_pos += b.labels[i].second;
  }
  AgreementReport report;
  report.p_o = equal / n;
  const double pa = a_pos / n;
  const double pb = b_pos / n;
  report.p_e = pa * pb + (1.0 - pa) * (1.0 - pb);
  // Both raters stuck to one identical class: agreement is total and the
  // usual formula degenerates to 0/0.
  if (report.p_e >= 1.0) {
    report.kappa = report.p_o >= 1.0 ? 1.0 : 0.0;
  } else {
    report.kappa = (report.p_o - report.p_e) / (1.0 - report.p_e);
  }
  return report;
}

ConfusionReport confusion_metrics(const LabelVector& predicted, const LabelVector& truth) {
  validate_aligned(predicted, truth);
  ConfusionReport r;
  for (std::size_t i = 0; i < predicted.labels.size(); ++i) {
    const int p = predicted.labels[i].second;
    const int t = truth.labels[i].second;
    if (p == 1 && t == 1) ++r.tp;
    if (p == 1 && t == 0) ++r.fp;
    if (p == 0 && t == 1) ++r.fn;
    if (p == 0 && t == 0) ++r.tn;
  }
  if (r.tp + r.fp > 0) {
    r.precision = static_cast<double>(r.tp) / (r.tp + r.fp);
    r.fp_pct = static_cast<double>(r.fp) / (r.tp + r.fp);
  }
  if (r.tp + r.fn > 0) r.recall = static_cast<double>(r.tp) / (r.tp + r.fn);
  if (2 * r.tp + r.fp + r.fn > 0) {
    r.f1 = 2.0 * r.tp / (2.0 * r.tp + r.fp + r.fn);
  }
  if (r.fn + r.tn > 0) r.fn_pct = static_cast<double>(r.fn) / (r.fn + r.tn);
  r.table2_score = 1.0 - r.fp_pct;
  return r;
}

nlohmann::json agreement_to_json(const AgreementReport& report) {
  return {{"p_o", report.p_o}, {"p_e", report.p_e}, {"kappa", report.kappa}};
}

nlohmann::json confusion_to_json(const ConfusionReport& report) {
  return {{"tp", report.tp},
          {"fp", report.fp},
          {"fn", report.fn},
          {"tn", report.tn},
          {"precision", report.precision},
          {"recall", report.recall},
          {"f1", report.f1},
          {"fp_pct", report.fp_pct},
          {"fn_pct", report.fn_pct},
          {"table2_score", report.table2_score}};
}

}  // namespace ccc
