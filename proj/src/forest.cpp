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

#include "ccc/forest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "ccc/jsonl.hpp"
#include "ccc/rng.hpp"

namespace ccc {

const std::array<std::string, kFeatureCount>& feature_names() {
  static const std::array<std::string, kFeatureCount> kNames = {
      "has_keyword_title",
      "category_level",
      "num_category_paths",
      "num_category_territories",
      "has_language_weak",
      "num_affiliation_matches",
      "num_has_part_matches",
      "inlinks_from_ccc",
      "percent_inlinks_from_ccc",
      "outlinks_to_ccc",
      "percent_outlinks_to_ccc",
      "num_other_ccc_potential_matches",
      "percent_inlinks_from_geolocated_abroad",
      "percent_outlinks_to_geolocated_abroad",
  };
  return kNames;
}

FeatureVector vectorize(const QualificationRecord& r) {
  FeatureVector v{};
  v[0] = r.keyword_title.empty() ? 0.0 : 1.0;
  v[1] = r.crawl.level;
  v[2] = static_cast<double>(r.crawl.num_paths);
  v[3] = static_cast<double>(r.crawl.territories.size());
  v[4] = r.group_evidence(PropertyGroup::LanguageWeak).empty() ? 0.0 : 1.0;
  v[5] = static_cast<double>(r.group_evidence(PropertyGroup::Affiliation).size());
  v[6] = static_cast<double>(r.group_evidence(PropertyGroup::HasPart).size());
  v[7] = static_cast<double>(r.inlinks_from_ccc);
  v[8] = r.percent_inlinks_from_ccc;
  v[9] = static_cast<double>(r.outlinks_to_ccc);
  v[10] = r.percent_outlinks_to_ccc;
  std::size_t other = 0;
  for (PropertyGroup g : {PropertyGroup::LanguageStrong, PropertyGroup::CreatedBy,
                          PropertyGroup::PartOf, PropertyGroup::LanguageWeak,
                          PropertyGroup::Affiliation, PropertyGroup::HasPart}) {
    other += r.group_other(g).size();
  }
  v[11] = static_cast<double>(other);
  v[12] = r.percent_inlinks_from_abroad;
  v[13] = r.percent_outlinks_to_abroad;
  return v;
}

TrainingSet build_training_set(const std::vector<QualificationRecord>& records,
                               std::uint64_t seed, int neg_ratio) {
  if (neg_ratio < 1) throw ValidationError("neg_ratio must be positive");

  std::vector<const QualificationRecord*> positives;
  std::vector<const QualificationRecord*> pool;
  for (const auto& r : records) {
    (r.class_label == QualLabel::ReliablyCCC ? positives : pool).push_back(&r);
  }
  auto by_page = [](const QualificationRecord* a, const QualificationRecord* b) {
    return a->page_id < b->page_id;
  };
  std::sort(positives.begin(), positives.end(), by_page);
  std::sort(pool.begin(), pool.end(), by_page);

  if (positives.empty()) throw ValidationError("empty positive class");
  if (pool.empty()) throw ValidationError("no records available for negative sampling");

  TrainingSet ts;
  for (const auto* r : positives) {
    ts.rows.push_back({vectorize(*r), 1, r->page_id, false});
  }

  const std::size_t need = positives.size() * static_cast<std::size_t>(neg_ratio);
  Rng rng(seed);
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  for (std::size_t k = 0; k < need; ++k) {
    const QualificationRecord* r =
        k < order.size() ? pool[order[k]] : pool[rng.bounded(pool.size())];
    ts.rows.push_back({vectorize(*r), 0, r->page_id, true});
  }
  return ts;
}

namespace {

std::string row_key(const FeatureVector& x, int label) {
  std::string key;
  char buf[32];
  for (double v : x) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    key.append(buf, end);
    key.push_back(',');
  }
  key.push_back(static_cast<char>('0' + label));
  return key;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

double gini(std::int64_t c0, std::int64_t c1) {
  std::int64_t n = c0 + c1;
  if (n == 0) return 0.0;
  double p0 = static_cast<double>(c0) / n;
  double p1 = static_cast<double>(c1) / n;
  return 1.0 - p0 * p0 - p1 * p1;
}

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double weighted_gini = 0.0;
};

}  // namespace

int Tree::vote(const FeatureVector& x) const {
  int idx = 0;
  while (nodes[idx].feature >= 0) {
    const TreeNode& n = nodes[idx];
    idx = x[n.feature] <= n.threshold ? n.left : n.right;
  }
  return nodes[idx].count1 >= nodes[idx].count0 ? 1 : 0;
}

ForestModel train(const TrainingSet& ts, const ForestConfig& config) {
  if (config.estimators < 1) throw ValidationError("estimators must be positive");
  if (config.max_features < 1 || config.max_features > kFeatureCount) {
    throw ValidationError("max_features out of range");
  }
  if (config.min_split < 2) throw ValidationError("min_split must be at least 2");
  if (ts.rows.empty()) throw ValidationError("empty training set");
  bool has0 = false, has1 = false;
  for (const auto& row : ts.rows) (row.label ? has1 : has0) = true;
  if (!has0 || !has1) throw ValidationError("single-class training set");

  // Canonical row order: content hash then content, so any permutation of
  // the same multiset of rows trains the same forest.
  const std::size_t n = ts.rows.size();
  std::vector<std::pair<std::uint64_t, std::string>> keys(n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    keys[i].second = row_key(ts.rows[i].x, ts.rows[i].label);
    keys[i].first = fnv1a(keys[i].second);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (keys[a].first != keys[b].first) return keys[a].first < keys[b].first;
    return keys[a].second < keys[b].second;
  });
  std::vector<FeatureVector> x(n);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = ts.rows[order[i]].x;
    y[i] = ts.rows[order[i]].label;
  }

  ForestModel model;
  model.config = config;
  model.trees.resize(config.estimators);
  std::array<double, kFeatureCount> raw_importance{};
  std::vector<std::int64_t> oob_votes1(n, 0), oob_votes0(n, 0);

  for (int t = 0; t < config.estimators; ++t) {
    Rng rng(config.seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(t + 1));

    std::vector<int> sample(n);
    std::vector<char> inbag(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t pick = rng.bounded(n);
      sample[k] = static_cast<int>(pick);
      inbag[pick] = 1;
    }

    Tree& tree = model.trees[t];
    tree.nodes.emplace_back();
    struct Item {
      int node;
      std::vector<int> rows;
    };
    std::vector<Item> stack;
    stack.push_back({0, std::move(sample)});

    while (!stack.empty()) {
      Item item = std::move(stack.back());
      stack.pop_back();
      std::int64_t c0 = 0, c1 = 0;
      for (int row : item.rows) (y[row] ? c1 : c0)++;
      TreeNode& node = tree.nodes[item.node];
      node.count0 = c0;
      node.count1 = c1;
      const std::int64_t total = c0 + c1;
      if (c0 == 0 || c1 == 0 || total < config.min_split) continue;

      const double parent_gini = gini(c0, c1);
      std::vector<int> perm(kFeatureCount);
      std::iota(perm.begin(), perm.end(), 0);
      rng.shuffle(perm);

      SplitChoice best;
      bool have_best = false;
      int evaluated = 0;
      std::vector<int> sorted_rows;
      for (int f : perm) {
        if (evaluated >= config.max_features) break;
        sorted_rows = item.rows;
        std::sort(sorted_rows.begin(), sorted_rows.end(), [&](int a, int b) {
          if (x[a][f] != x[b][f]) return x[a][f] < x[b][f];
          return a < b;
        });
        if (x[sorted_rows.front()][f] == x[sorted_rows.back()][f]) continue;  // constant
        ++evaluated;

        std::int64_t l0 = 0, l1 = 0;
        for (std::size_t k = 0; k + 1 < sorted_rows.size(); ++k) {
          int row = sorted_rows[k];
          (y[row] ? l1 : l0)++;
          double v = x[row][f];
          double v_next = x[sorted_rows[k + 1]][f];
          if (v == v_next) continue;
          std::int64_t nl = l0 + l1;
          std::int64_t nr = total - nl;
          double weighted =
              (nl * gini(l0, l1) + nr * gini(c0 - l0, c1 - l1)) / static_cast<double>(total);
          if (!have_best || weighted < best.weighted_gini) {
            best = {f, v + (v_next - v) / 2.0, weighted};
            have_best = true;
          }
        }
      }

      if (!have_best || parent_gini - best.weighted_gini <= 1e-12) continue;

      raw_importance[best.feature] += static_cast<double>(total) * (parent_gini - best.weighted_gini);

      std::vector<int> left_rows, right_rows;
      for (int row : item.rows) {
        (x[row][best.feature] <= best.threshold ? left_rows : right_rows).push_back(row);
      }
      const int left_idx = static_cast<int>(tree.nodes.size());
      const int right_idx = left_idx + 1;
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      // re-fetch: emplace_back may have reallocated the node storage
      TreeNode& split = tree.nodes[item.node];
      split.feature = best.feature;
      split.threshold = best.threshold;
      split.left = left_idx;
      split.right = right_idx;
      stack.push_back({right_idx, std::move(right_rows)});
      stack.push_back({left_idx, std::move(left_rows)});
    }

    for (std::size_t i = 0; i < n; ++i) {
      if (inbag[i]) continue;
      (tree.vote(x[i]) ? oob_votes1[i] : oob_votes0[i])++;
    }
  }

  double importance_total = 0.0;
  for (double v : raw_importance) importance_total += v;
  if (importance_total > 0.0) {
    for (int f = 0; f < kFeatureCount; ++f) {
      model.importances[f] = raw_importance[f] / importance_total;
    }
  }

  std::int64_t oob_correct = 0, oob_counted = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (oob_votes0[i] + oob_votes1[i] == 0) continue;
    ++oob_counted;
    int predicted = oob_votes1[i] >= oob_votes0[i] ? 1 : 0;
    if (predicted == y[i]) ++oob_correct;
  }
  model.oob_accuracy = oob_counted ? static_cast<double>(oob_correct) / oob_counted : 0.0;

  std::int64_t train_correct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (classify(model, x[i]) == y[i]) ++train_correct;
  }
  model.training_accuracy = static_cast<double>(train_correct) / n;

  return model;
}

double predict_proba(const ForestModel& model, const FeatureVector& x) {
  if (model.trees.empty()) throw ValidationError("model has no trees");
  std::int64_t positive = 0;
  for (const auto& tree : model.trees) positive += tree.vote(x);
  return static_cast<double>(positive) / model.trees.size();
}

int classify(const ForestModel& model, const FeatureVector& x) {
  return predict_proba(model, x) >= 0.5 ? 1 : 0;
}

void finalize_ccc(std::vector<QualificationRecord>& records, const ForestModel& model) {
  for (auto& r : records) {
    if (r.class_label == QualLabel::ReliablyCCC) {
      r.ccc_binary = 1;
    } else if (r.class_label == QualLabel::PotentiallyCCC) {
      r.ccc_binary = classify(model, vectorize(r));
    } else {
      r.ccc_binary = 0;
    }
  }
}

void save_model(const ForestModel& model, const std::filesystem::path& path) {
  nlohmann::json j;
  j["model_version"] = 1;
  j["seed"] = model.config.seed;
  j["estimators"] = model.config.estimators;
  j["max_features"] = model.config.max_features;
  j["min_split"] = model.config.min_split;
  j["oob_accuracy"] = model.oob_accuracy;
  j["training_accuracy"] = model.training_accuracy;
  j["feature_names"] = feature_names();
  j["importances"] = model.importances;
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& tree : model.trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : tree.nodes) {
      nodes.push_back({{"feature", n.feature},
                       {"threshold", n.threshold},
                       {"left", n.left},
                       {"right", n.right},
                       {"count0", n.count0},
                       {"count1", n.count1}});
    }
    trees.push_back({{"nodes", std::move(nodes)}});
  }
  j["trees"] = std::move(trees);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw ValidationError("write failed for " + path.string());
}

ForestModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  if (json_int(j, "model_version") != 1) {
    throw ValidationError(path.string() + ": unsupported model_version");
  }
  ForestModel model;
  model.config.seed = j.at("seed").get<std::uint64_t>();
  model.config.estimators = static_cast<int>(json_int(j, "estimators"));
  model.config.max_features = static_cast<int>(json_int(j, "max_features"));
  model.config.min_split = static_cast<int>(json_int(j, "min_split"));
  model.oob_accuracy = json_double(j, "oob_accuracy");
  model.training_accuracy = json_double(j, "training_accuracy");
  auto imp = j.at("importances");
  if (imp.size() != kFeatureCount) throw ValidationError(path.string() + ": bad importances size");
  for (int f = 0; f < kFeatureCount; ++f) model.importances[f] = imp[f].get<double>();
  for (const auto& tj : j.at("trees")) {
    Tree tree;
    for (const auto& nj : tj.at("nodes")) {
      TreeNode n;
      n.feature = static_cast<int>(json_int(nj, "feature"));
      n.threshold = json_double(nj, "threshold");
      n.left = static_cast<int>(json_int(nj, "left"));
      n.right = static_cast<int>(json_int(nj, "right"));
      n.count0 = json_int(nj, "count0");
      n.count1 = json_int(nj, "count1");
      tree.nodes.push_back(n);
    }
    if (tree.nodes.empty()) throw ValidationError(path.string() + ": empty tree");
    model.trees.push_back(std::move(tree));
  }
  if (model.trees.empty()) throw ValidationError(path.string() + ": model has no trees");
  return model;
}

}  // namespace ccc
