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

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccc/atlas.hpp"
#include "ccc/attribution.hpp"
#include "ccc/csv.hpp"
#include "ccc/emit.hpp"
#include "ccc/evaluation.hpp"
#include "ccc/features.hpp"
#include "ccc/forest.hpp"
#include "ccc/snapshot.hpp"
#include "ccc/toplists.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string snapshot_dir;
  std::string atlas_path;
  std::string boundaries_path;
  std::string properties_path;  // optional property-group overrides
  std::string language;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int neg_ratio = 5;
  int estimators = 100;
  int max_features = 4;
  int min_split = 2;
  int crawl_depth = 15;
  int closure_rounds = 10;
  int reliable_passes = 1;
  int workers = 1;
  bool compress = false;
  bool sqlite = false;
  // evaluate
  int n_pos = 100;
  int n_neg = 100;
  std::vector<std::string> rater_files;
  std::string truth_file;
  // toplists
  std::string target;
  std::string format = "csv";
  std::vector<std::string> list_specs;
  std::int64_t wiki_start_date = 0;  // 0 means derive from the records
  std::int64_t reference_date = 0;
  int limit = ccc::kDefaultListLimit;
};

void apply_config(Options& opt, const nlohmann::json& config, const std::string& path) {
  if (!config.is_object()) throw ccc::ValidationError(path + ": config must be a JSON object");
  for (const auto& [key, value] : config.items()) {
    if (key == "snapshot") opt.snapshot_dir = value.get<std::string>();
    else if (key == "atlas") opt.atlas_path = value.get<std::string>();
    else if (key == "boundaries") opt.boundaries_path = value.get<std::string>();
    else if (key == "properties") opt.properties_path = value.get<std::string>();
    else if (key == "language") opt.language = value.get<std::string>();
    else if (key == "out") opt.out_dir = value.get<std::string>();
    else if (key == "seed") { opt.seed = value.get<std::uint64_t>(); opt.seed_set = true; }
    else if (key == "neg_ratio") opt.neg_ratio = value.get<int>();
    else if (key == "estimators") opt.estimators = value.get<int>();
    else if (key == "max_features") opt.max_features = value.get<int>();
    else if (key == "min_split") opt.min_split = value.get<int>();
    else if (key == "crawl_depth") opt.crawl_depth = value.get<int>();
    else if (key == "closure_rounds") opt.closure_rounds = value.get<int>();
    else if (key == "reliable_passes") opt.reliable_passes = value.get<int>();
    else if (key == "workers") opt.workers = value.get<int>();
    else if (key == "compress") opt.compress = value.get<bool>();
    else if (key == "sqlite") opt.sqlite = value.get<bool>();
    else if (key == "n_pos") opt.n_pos = value.get<int>();
    else if (key == "n_neg") opt.n_neg = value.get<int>();
    else if (key == "raters") opt.rater_files = value.get<std::vector<std::string>>();
    else if (key == "truth") opt.truth_file = value.get<std::string>();
    else if (key == "target") opt.target = value.get<std::string>();
    else if (key == "format") opt.format = value.get<std::string>();
    else if (key == "list_specs") opt.list_specs = value.get<std::vector<std::string>>();
    else if (key == "wiki_start_date") opt.wiki_start_date = value.get<std::int64_t>();
    else if (key == "reference_date") opt.reference_date = value.get<std::int64_t>();
    else if (key == "limit") opt.limit = value.get<int>();
    else throw ccc::ValidationError(path + ": unknown config key \"" + key + "\"");
  }
}

void check_positive(int value, const char* flag) {
  if (value <= 0) throw ccc::ValidationError(std::string(flag) + " must be positive");
}

void require_flag(const std::string& value, const char* flag, const std::string& stage) {
  if (value.empty()) {
    throw ccc::ValidationError("missing " + std::string(flag) + " (required for " + stage + ")");
  }
}

void require_path(const std::string& value, const char* flag) {
  if (!fs::exists(value)) {
    throw ccc::ValidationError(std::string(flag) + " path does not exist: " + value);
  }
}

// Loads shared inputs once and hands out artifact paths.
struct Stage {
  const Options& opt;
  std::optional<ccc::WikiSnapshot> snapshot_;
  std::optional<ccc::LanguageAtlas> atlas_;
  std::optional<ccc::BoundarySet> boundaries_;

  const ccc::WikiSnapshot& snapshot() {
    if (!snapshot_) snapshot_ = ccc::load_snapshot(opt.snapshot_dir, opt.language);
    return *snapshot_;
  }
  const ccc::LanguageAtlas& atlas() {
    if (!atlas_) atlas_ = ccc::LanguageAtlas::load(opt.atlas_path);
    return *atlas_;
  }
  const ccc::BoundarySet& boundaries() {
    if (!boundaries_) boundaries_ = ccc::BoundarySet::load(opt.boundaries_path, &atlas());
    return *boundaries_;
  }
  ccc::PropertyCatalog catalog() const {
    return opt.properties_path.empty() ? ccc::PropertyCatalog::defaults()
                                       : ccc::PropertyCatalog::load(opt.properties_path);
  }

  fs::path out(const std::string& name) const { return fs::path(opt.out_dir) / name; }

  fs::path artifact(const std::string& name, const std::string& producer) const {
    fs::path path = out(name);
    if (!fs::exists(path)) {
      throw ccc::ValidationError("missing " + name + " output; run " + producer + " first");
    }
    return path;
  }
};

void write_json(const fs::path& path, const nlohmann::json& value) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ccc::ValidationError("cannot write " + path.string());
  file << value.dump(2) << "\n";
}

void run_ingest(Stage& stage) {
  const ccc::WikiSnapshot& snapshot = stage.snapshot();
  const ccc::LanguageAtlas& atlas = stage.atlas();
  const ccc::BoundarySet& boundaries = stage.boundaries();
  std::int64_t links = 0;
  for (const auto& [id, page] : snapshot.pages()) {
    links += static_cast<std::int64_t>(snapshot.outlinks(id).size());
  }
  nlohmann::json manifest = {
      {"language", snapshot.language()},
      {"pages", snapshot.pages().size()},
      {"links", links},
      {"categories", snapshot.categories().size()},
      {"wikidata_entities", snapshot.wikidata_entities().size()},
      {"atlas_territories", atlas.territories_for(snapshot.language()).size()},
      {"boundaries", boundaries.entries().size()},
  };
  write_json(stage.out("ingest.json"), manifest);
  std::cout << "ingested " << snapshot.pages().size() << " pages for "
            << snapshot.language() << "\n";
}

void run_qualify(Stage& stage) {
  ccc::QualifyConfig config;
  config.workers = stage.opt.workers;
  config.crawl_depth_cap = stage.opt.crawl_depth;
  config.closure_rounds = stage.opt.closure_rounds;
  config.reliable_passes = stage.opt.reliable_passes;
  std::vector<ccc::QualificationRecord> records =
      ccc::qualify_all(stage.snapshot(), stage.atlas(), stage.boundaries(), stage.catalog(),
                       config);
  ccc::save_records(records, stage.out("qualification.jsonl"));
  std::map<std::string, int> histogram;
  for (const auto& r : records) ++histogram[ccc::to_string(r.class_label)];
  std::cout << "qualified " << records.size() << " pages:";
  for (const auto& [label, count] : histogram) std::cout << " " << label << "=" << count;
  std::cout << "\n";
}

void run_train(Stage& stage) {
  if (!stage.opt.seed_set) {
    throw ccc::ValidationError("missing --seed (required for train)");
  }
  std::vector<ccc::QualificationRecord> records =
      ccc::load_records(stage.artifact("qualification.jsonl", "qualify"));
  ccc::TrainingSet ts = ccc::build_training_set(records, stage.opt.seed, stage.opt.neg_ratio);
  ccc::ForestConfig config;
  config.estimators = stage.opt.estimators;
  config.max_features = stage.opt.max_features;
  config.min_split = stage.opt.min_split;
  config.seed = stage.opt.seed;
  ccc::ForestModel model = ccc::train(ts, config);
  ccc::save_model(model, stage.out("model.json"));
  std::cout << "trained " << model.trees.size() << " trees on " << ts.rows.size()
            << " rows; oob_accuracy=" << model.oob_accuracy
            << " training_accuracy=" << model.training_accuracy << "\n";
}

void run_classify(Stage& stage) {
  std::vector<ccc::QualificationRecord> records =
      ccc::load_records(stage.artifact("qualification.jsonl", "qualify"));
  ccc::ForestModel model = ccc::load_model(stage.artifact("model.json", "train"));
  ccc::finalize_ccc(records, model);
  ccc::save_records(records, stage.out("classified.jsonl"));
  std::int64_t positive = 0;
  for (const auto& r : records) positive += r.ccc_binary;
  std::cout << "classified " << positive << " of " << records.size() << " pages as CCC\n";
}

void run_attribute(Stage& stage) {
  std::vector<ccc::QualificationRecord> records =
      ccc::load_records(stage.artifact("classified.jsonl", "classify"));
  ccc::attribute_main_territory(records, stage.atlas(), stage.opt.language);
  ccc::save_records(records, stage.out("attributed.jsonl"));

  std::map<std::string, int> rules;
  for (const auto& r : records) {
    if (r.ccc_binary == 1) ++rules[r.attribution_rule];
  }
  nlohmann::json report = {{"territory_shares", ccc::territory_distribution(records)},
                           {"rule_counts", rules}};
  write_json(stage.out("attribution.json"), report);
  std::cout << "attributed main territories:";
  for (const auto& [rule, count] : rules) std::cout << " " << rule << "=" << count;
  std::cout << "\n";
}

void run_emit(Stage& stage) {
  std::vector<ccc::QualificationRecord> records =
      ccc::load_records(stage.artifact("attributed.jsonl", "attribute"));
  const ccc::WikiSnapshot& snapshot = stage.snapshot();
  std::string name = "ccc_" + stage.opt.language + ".csv";
  if (stage.opt.compress) name += ".bz2";
  std::size_t rows = ccc::emit_csv(records, snapshot, stage.out(name), stage.opt.compress);

  std::map<std::string, const std::vector<ccc::QualificationRecord>*> by_language;
  by_language[stage.opt.language] = &records;
  write_json(stage.out("summary.json"), ccc::summary_to_json(ccc::summarize(by_language)));

  if (stage.opt.sqlite) {
    std::map<std::string, ccc::LanguageDataset> datasets;
    datasets[stage.opt.language] = {&records, &snapshot};
    ccc::emit_sqlite(datasets, stage.out("ccc.sqlite"));
  }
  std::cout << "emitted " << rows << " rows to " << name << "\n";
}

void run_evaluate(Stage& stage) {
  std::vector<ccc::QualificationRecord> records =
      ccc::load_records(stage.artifact("classified.jsonl", "classify"));
  std::vector<ccc::PageId> sample =
      ccc::sample_for_assessment(records, stage.opt.n_pos, stage.opt.n_neg, stage.opt.seed);

  std::map<ccc::PageId, const ccc::QualificationRecord*> by_page;
  for (const auto& r : records) by_page[r.page_id] = &r;
  {
    std::ofstream file(stage.out("assessment_sample.csv"), std::ios::binary);
    if (!file) throw ccc::ValidationError("cannot write assessment_sample.csv");
    file << "page_id,page_title\n";
    for (ccc::PageId id : sample) {
      file << ccc::csv::join_row({std::to_string(id), by_page.at(id)->page_title});
    }
  }

  nlohmann::json report = {{"sample_size", sample.size()},
                           {"n_pos", stage.opt.n_pos},
                           {"n_neg", stage.opt.n_neg},
                           {"seed", stage.opt.seed}};

  std::vector<ccc::LabelVector> raters;
  for (const std::string& file : stage.opt.rater_files) {
    raters.push_back(ccc::read_labels_csv(file, fs::path(file).stem().string()));
  }
  nlohmann::json agreements = nlohmann::json::object();
  for (const auto& rater : raters) {
    std::vector<ccc::PageId> ids;
    for (const auto& [page, label] : rater.labels) ids.push_back(page);
    ccc::LabelVector algorithm = ccc::labels_from_records(records, ids, "algorithm");
    agreements["algorithm_vs_" + rater.rater] =
        ccc::agreement_to_json(ccc::cohens_kappa(algorithm, rater));
  }
  for (std::size_t i = 0; i < raters.size(); ++i) {
    for (std::size_t j = i + 1; j < raters.size(); ++j) {
      std::string key = raters[i].rater + "_vs_" + raters[j].rater;
      try {
        agreements[key] = ccc::agreement_to_json(ccc::cohens_kappa(raters[i], raters[j]));
      } catch (const ccc::ValidationError& e) {
        agreements[key] = {{"error", e.what()}};
      }
    }
  }
  if (!agreements.empty()) report["kappa"] = agreements;

  if (!stage.opt.truth_file.empty()) {
    ccc::LabelVector truth = ccc::read_labels_csv(stage.opt.truth_file, "truth");
    std::vector<ccc::PageId> ids;
    for (const auto& [page, label] : truth.labels) ids.push_back(page);
    ccc::LabelVector predicted = ccc::labels_from_records(records, ids, "algorithm");
    report["confusion"] = ccc::confusion_to_json(ccc::confusion_metrics(predicted, truth));
  }

  write_json(stage.out("evaluation.json"), report);
  std::cout << "sampled " << sample.size() << " pages for assessment\n";
}

void run_toplists(Stage& stage) {
  require_flag(stage.opt.target, "--target", "toplists");
  std::vector<ccc::QualificationRecord> records =
      ccc::load_records(stage.artifact("attributed.jsonl", "attribute"));
  const ccc::WikiSnapshot& snapshot = stage.snapshot();
  ccc::TableFormat format = ccc::table_format_from_string(stage.opt.format);
  const char* extension = format == ccc::TableFormat::Csv ? ".csv" : ".html";

  std::vector<ccc::ListPreset> presets;
  if (!stage.opt.list_specs.empty()) {
    for (const std::string& file : stage.opt.list_specs) {
      std::ifstream in(file);
      if (!in) throw ccc::ValidationError("cannot open list spec " + file);
      nlohmann::json spec;
      try {
        spec = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw ccc::ValidationError(file + ": " + e.what());
      }
      presets.push_back(ccc::list_preset_from_json(spec));
    }
  } else {
    std::int64_t start = stage.opt.wiki_start_date;
    std::int64_t reference = stage.opt.reference_date;
    if (start == 0 || reference == 0) {
      std::int64_t lo = 0;
      std::int64_t hi = 0;
      for (const auto& r : records) {
        if (lo == 0 || r.date_created < lo) lo = r.date_created;
        if (r.date_created > hi) hi = r.date_created;
      }
      if (start == 0) start = lo;
      if (reference == 0) reference = hi;
    }
    presets = ccc::default_presets(start, reference);
  }

  fs::path dir = stage.out("toplists");
  fs::create_directories(dir);
  std::vector<ccc::TopList> lists;
  for (const auto& preset : presets) {
    ccc::TopList list = ccc::generate_top_list(records, snapshot, preset.spec, preset.filter,
                                               stage.opt.target,
                                               std::min(preset.limit, stage.opt.limit));
    ccc::render_table(list, format, dir / (preset.name + extension));
    lists.push_back(std::move(list));
  }
  ccc::render_table(ccc::coverage_overview(lists), format,
                    dir / (std::string("coverage") + extension));
  std::cout << "wrote " << lists.size() << " top lists\n";
}

int run_stage(const std::string& name, Stage& stage, void (*fn)(Stage&)) {
  try {
    fn(stage);
    return 0;
  } catch (const ccc::ValidationError& e) {
    std::cerr << "cccgen " << name << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "cccgen " << name << ": " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;

  // The config file seeds the defaults; explicit flags override it below.
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    std::string path;
    if (arg == "--config" && i + 1 < argc) path = argv[i + 1];
    else if (arg.rfind("--config=", 0) == 0) path = arg.substr(9);
    else continue;
    try {
      std::ifstream file(path);
      if (!file) throw ccc::ValidationError("cannot open config " + path);
      nlohmann::json config;
      try {
        config = nlohmann::json::parse(file);
      } catch (const nlohmann::json::exception& e) {
        throw ccc::ValidationError(path + ": " + e.what());
      }
      apply_config(opt, config, path);
    } catch (const ccc::ValidationError& e) {
      std::cerr << "cccgen: " << e.what() << "\n";
      return 1;
    }
  }

  CLI::App app{"Cultural Context Content dataset generator"};
  app.require_subcommand(1);

  std::string config_path;  // consumed above; registered so CLI11 accepts it
  app.add_option("--config", config_path, "JSON config file mirroring the flags");
  app.add_option("--snapshot", opt.snapshot_dir, "directory with the snapshot JSONL files");
  app.add_option("--atlas", opt.atlas_path, "language-territory atlas CSV");
  app.add_option("--boundaries", opt.boundaries_path, "territory boundaries JSONL");
  app.add_option("--properties", opt.properties_path, "property-group overrides JSON");
  app.add_option("--language", opt.language, "wiki language code, e.g. it");
  app.add_option("--out", opt.out_dir, "output directory for artifacts");
  auto* seed_option = app.add_option("--seed", opt.seed, "RNG seed (required for train)");
  app.add_option("--neg-ratio", opt.neg_ratio, "negatives sampled per positive");
  app.add_option("--estimators", opt.estimators, "trees in the forest");
  app.add_option("--max-features", opt.max_features, "features tried per split");
  app.add_option("--min-split", opt.min_split, "minimum rows to split a node");
  app.add_option("--crawl-depth", opt.crawl_depth, "category crawl depth cap");
  app.add_option("--closure-rounds", opt.closure_rounds, "location closure rounds");
  app.add_option("--reliable-passes", opt.reliable_passes, "reliable-set growth passes");
  app.add_option("--workers", opt.workers, "worker threads for qualification");
  app.add_flag("--compress", opt.compress, "bzip2-compress the dataset CSV");
  app.add_flag("--sqlite", opt.sqlite, "also write an SQLite database");

  CLI::App* ingest = app.add_subcommand("ingest", "load and validate the snapshot inputs");
  CLI::App* qualify = app.add_subcommand("qualify", "compute qualification records");
  CLI::App* train = app.add_subcommand("train", "train the random forest");
  CLI::App* classify = app.add_subcommand("classify", "finalize the CCC labels");
  CLI::App* attribute = app.add_subcommand("attribute", "assign main territories");
  CLI::App* emit = app.add_subcommand("emit", "write the dataset CSV and summary");
  CLI::App* evaluate = app.add_subcommand("evaluate", "sample for rating and score raters");
  CLI::App* toplists = app.add_subcommand("toplists", "generate Top CCC lists");
  CLI::App* all = app.add_subcommand("all", "run the whole pipeline");

  evaluate->add_option("--n-pos", opt.n_pos, "positives in the assessment sample");
  evaluate->add_option("--n-neg", opt.n_neg, "negatives in the assessment sample");
  evaluate->add_option("--rater", opt.rater_files, "rater labels CSV (repeatable)");
  evaluate->add_option("--truth", opt.truth_file, "ground-truth labels CSV");

  for (CLI::App* sub : {toplists, all}) {
    sub->add_option("--target", opt.target, "wiki code availability is checked against");
    sub->add_option("--format", opt.format, "table format: csv or html");
    sub->add_option("--list-spec", opt.list_specs, "list spec JSON (repeatable)");
    sub->add_option("--wiki-start-date", opt.wiki_start_date, "YYYYMMDD for 'first' windows");
    sub->add_option("--reference-date", opt.reference_date, "YYYYMMDD for 'last' windows");
    sub->add_option("--limit", opt.limit, "cap on list length");
  }

  for (CLI::App* sub : {ingest, qualify, train, classify, attribute, emit, evaluate, toplists,
                        all}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  opt.seed_set = opt.seed_set || seed_option->count() > 0;

  const std::string stage_name = app.get_subcommands().front()->get_name();
  try {
    check_positive(opt.neg_ratio, "--neg-ratio");
    check_positive(opt.estimators, "--estimators");
    check_positive(opt.max_features, "--max-features");
    check_positive(opt.min_split, "--min-split");
    check_positive(opt.crawl_depth, "--crawl-depth");
    check_positive(opt.closure_rounds, "--closure-rounds");
    check_positive(opt.reliable_passes, "--reliable-passes");
    check_positive(opt.workers, "--workers");
    check_positive(opt.n_pos, "--n-pos");
    check_positive(opt.n_neg, "--n-neg");
    check_positive(opt.limit, "--limit");

    const bool needs_snapshot = stage_name == "ingest" || stage_name == "qualify" ||
                                stage_name == "emit" || stage_name == "toplists" ||
                                stage_name == "all";
    const bool needs_atlas = stage_name == "ingest" || stage_name == "qualify" ||
                             stage_name == "attribute" || stage_name == "all";
    if (needs_snapshot || needs_atlas || stage_name == "attribute") {
      require_flag(opt.language, "--language", stage_name);
    }
    if (needs_snapshot) {
      require_flag(opt.snapshot_dir, "--snapshot", stage_name);
      require_path(opt.snapshot_dir, "--snapshot");
    }
    if (needs_atlas) {
      require_flag(opt.atlas_path, "--atlas", stage_name);
      require_path(opt.atlas_path, "--atlas");
    }
    if (stage_name == "ingest" || stage_name == "qualify" || stage_name == "all") {
      require_flag(opt.boundaries_path, "--boundaries", stage_name);
      require_path(opt.boundaries_path, "--boundaries");
    }
    if (!opt.properties_path.empty()) require_path(opt.properties_path, "--properties");
    fs::create_directories(opt.out_dir);
  } catch (const ccc::ValidationError& e) {
    std::cerr << "cccgen " << stage_name << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "cccgen " << stage_name << ": " << e.what() << "\n";
    return 2;
  }

  Stage stage{opt};
  if (stage_name == "ingest") return run_stage("ingest", stage, run_ingest);
  if (stage_name == "qualify") return run_stage("qualify", stage, run_qualify);
  if (stage_name == "train") return run_stage("train", stage, run_train);
  if (stage_name == "classify") return run_stage("classify", stage, run_classify);
  if (stage_name == "attribute") return run_stage("attribute", stage, run_attribute);
  if (stage_name == "emit") return run_stage("emit", stage, run_emit);
  if (stage_name == "evaluate") return run_stage("evaluate", stage, run_evaluate);
  if (stage_name == "toplists") return run_stage("toplists", stage, run_toplists);

  // all: the same stage functions in order, so artifacts match stage-by-stage
  // runs byte for byte. Top lists join in only when a target wiki is named.
  struct Step {
    const char* name;
    void (*fn)(Stage&);
  };
  std::vector<Step> steps = {{"ingest", run_ingest},       {"qualify", run_qualify},
                             {"train", run_train},         {"classify", run_classify},
                             {"attribute", run_attribute}, {"emit", run_emit}};
  if (!opt.target.empty()) steps.push_back({"toplists", run_toplists});
  for (const Step& step : steps) {
    int code = run_stage(step.name, stage, step.fn);
    if (code != 0) return code;
  }
  return 0;
}
