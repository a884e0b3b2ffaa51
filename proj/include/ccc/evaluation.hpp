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
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ccc/features.hpp"

namespace ccc {

// Labels from one rater, kept in a fixed page order so two raters can be
// compared position by position.
struct LabelVector {
  std::string rater;
  std::vector<std::pair<PageId, int>> labels;  // (page_id, 0 or 1)
};

struct AgreementReport {
  double p_o = 0.0;    // observed agreement
  double p_e = 0.0;    // chance agreement from the marginals
  double kappa = 0.0;
};

struct ConfusionReport {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;      // harmonic, 2tp / (2tp + fp + fn)
  double fp_pct = 0.0;  // fp over the predicted-positive pool
  double fn_pct = 0.0;  // fn over the predicted-negative pool
  double table2_score = 0.0;  // 1 - fp_pct, i.e. precision
};

// Seeded balanced sample for manual rating: n_pos pages with ccc_binary 1
// followed by n_neg with ccc_binary 0, drawn without replacement.
std::vector<PageId> sample_for_assessment(const std::vector<QualificationRecord>& records,
                                          int n_pos, int n_neg, std::uint64_t seed);

// The algorithm's own labels over `ids`, in that order.
LabelVector labels_from_records(const std::vector<QualificationRecord>& records,
                                const std::vector<PageId>& ids, const std::string& rater);

// CSV with header `page_id,label`; labels must be 0 or 1.
LabelVector read_labels_csv(const std::filesystem::path& path, const std::string& rater);

AgreementReport cohens_kappa(const LabelVector& a, const LabelVector& b);

ConfusionReport confusion_metrics(const LabelVector& predicted, const LabelVector& truth);

nlohmann::json agreement_to_json(const AgreementReport& report);
nlohmann::json confusion_to_json(const ConfusionReport& report);

}  // namespace ccc
