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

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ccc/features.hpp"
#include "ccc/ids.hpp"

namespace ccc {

inline constexpr int kFeatureCount = 14;
using FeatureVector = std::array<double, kFeatureCount>;

// Component names in model order; the order is part of the model format.
const std::array<std::string, kFeatureCount>& feature_names();

FeatureVector vectorize(const QualificationRecord& record);

struct TrainingRow {
  FeatureVector x{};
  int label = 0;
  PageId source_page = 0;
  bool sampled_negative = false;  // false for reliable positives
};

struct TrainingSet {
  std::vector<TrainingRow> rows;
};

// Positives are the ReliablyCCC records; negatives are sampled uniformly
// from everything else, neg_ratio per positive, without replacement while
// the pool lasts and with replacement afterwards.
TrainingSet build_training_set(const std::vector<QualificationRecord>& records,
                               std::uint64_t seed, int neg_ratio = 5);

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::int64_t count0 = 0;
  std::int64_t count1 = 0;
};

struct Tree {
  std::vector<TreeNode> nodes;

  int vote(const FeatureVector& x) const;  // leaf majority, ties to 1
};

struct ForestConfig {
  int estimators = 100;
  int max_features = 4;  // ceil(sqrt(14))
  int min_split = 2;
  std::uint64_t seed = 0;
};

struct ForestModel {
  ForestConfig config;
  std::vector<Tree> trees;
  double oob_accuracy = 0.0;
  double training_accuracy = 0.0;
  std::array<double, kFeatureCount> importances{};  // mean impurity decrease, sums to 1
};

// CART with Gini impurity on bootstrap samples; per-tree seeds derive from
// the master seed, and rows are canonicalized by content hash first, so the
// model depends only on (seed, row multiset).
ForestModel train(const TrainingSet& ts, const ForestConfig& config);

double predict_proba(const ForestModel& model, const FeatureVector& x);
int classify(const ForestModel& model, const FeatureVector& x);

// ccc_binary = 1 for ReliablyCCC and for PotentiallyCCC classified positive;
// everything else 0.
void finalize_ccc(std::vector<QualificationRecord>& records, const ForestModel& model);

void save_model(const ForestModel& model, const std::filesystem::path& path);
ForestModel load_model(const std::filesystem::path& path);

}  // namespace ccc
