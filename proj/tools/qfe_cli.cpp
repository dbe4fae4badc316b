// Copyright 2026 The QFE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qfe: corpus generation, classifier training, single-ranking fairness
// estimation and full benchmark runs. JSON goes to stdout, progress to stderr.
// Exit codes: 0 success, 1 internal error, 2 usage or input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qfe/qfe.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

void progress(const std::string& line) { std::cerr << "qfe: " << line << '\n'; }

fs::path prepare_out_dir(const std::string& out) {
  const fs::path dir(out);
  if (fs::is_directory(dir)) return dir;
  const fs::path parent = dir.has_parent_path() ? dir.parent_path() : fs::path(".");
  if (!fs::is_directory(parent)) throw qfe::Error("parent of output directory does not exist: " + parent.string());
  fs::create_directory(dir);
  return dir;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw qfe::Error("cannot write " + path.string());
  return f;
}

// Command-line overrides shared by generate and benchmark.
struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string methods;
  std::string cutoffs;
  std::string pool_sizes;
};

qfe::RunConfig resolve_config(const Overrides& o) {
  qfe::RunConfig config = o.config_path.empty() ? qfe::RunConfig{} : qfe::load_run_config(o.config_path);
  qfe::KeyValues kv;
  if (o.seed) kv["seed"] = std::to_string(*o.seed);
  if (!o.methods.empty()) kv["methods"] = o.methods;
  if (!o.cutoffs.empty()) kv["cutoffs"] = o.cutoffs;
  if (!o.pool_sizes.empty()) kv["pool_sizes"] = o.pool_sizes;
  qfe::apply_key_values(kv, config);
  return config;
}

int cmd_generate(const Overrides& o, const std::string& out) {
  const auto config = resolve_config(o);
  const auto dir = prepare_out_dir(out);
  progress("generating synthetic corpora with seed " + std::to_string(config.protocol.seed));
  const auto gen = qfe::generate_synthetic(config.synthetic, config.protocol.seed);
  {
    auto f = open_output(dir / "L.jsonl");
    qfe::write_corpus_jsonl(f, gen.labeled);
  }
  {
    auto f = open_output(dir / "U.jsonl");
    qfe::write_corpus_jsonl(f, gen.test);
  }
  {
    auto f = open_output(dir / "queries.tsv");
    qfe::write_queries_tsv(f, gen.queries);
  }
  ordered_json j{{"labeled", (dir / "L.jsonl").string()},
                 {"labeled_documents", gen.labeled.size()},
                 {"test", (dir / "U.jsonl").string()},
                 {"test_documents", gen.test.size()},
                 {"queries", (dir / "queries.tsv").string()},
                 {"query_count", gen.queries.size()}};
  std::cout << j.dump() << '\n';
  return kExitOk;
}

struct TrainFlags {
  std::string corpus;
  std::string model_out;
  std::uint64_t seed = 0;
  bool no_model_selection = false;
  double C = 1.0;
  std::string class_weighting = "none";
  std::size_t folds = 5;
};

int cmd_train(const TrainFlags& t) {
  const auto corpus = qfe::load_corpus_jsonl(t.corpus);
  if (corpus.empty()) throw qfe::Error(t.corpus + ": corpus is empty");
  for (const auto& d : corpus.documents) {
    if (!d.group) throw qfe::Error(t.corpus + ": document " + d.id + " has no group label");
  }
  qfe::CvOptions cv;
  cv.folds = t.folds;
  cv.seed = t.seed;
  qfe::ClassifierHyperParams hp{t.C, qfe::parse_class_weighting(t.class_weighting)};
  std::optional<double> cv_accuracy;
  if (!t.no_model_selection) {
    progress("model selection over " + std::to_string(qfe::default_hyperparameter_grid().size()) +
             " grid points, " + std::to_string(t.folds) + " folds");
    const auto sel = qfe::select_model(corpus, qfe::default_hyperparameter_grid(), cv);
    hp = sel.best;
    cv_accuracy = sel.best_accuracy;
    progress("selected C=" + std::to_string(hp.C) + " class_weighting=" + qfe::to_string(hp.class_weighting));
  }
  const auto model = qfe::train(corpus, hp);
  qfe::save_model(model, t.model_out);
  ordered_json j{{"model", t.model_out},
                 {"C", hp.C},
                 {"class_weighting", qfe::to_string(hp.class_weighting)},
                 {"training_documents", corpus.size()},
                 {"vocabulary_size", model.vocabulary.terms.size()},
                 {"iterations", model.iterations}};
  j["cv_accuracy"] = cv_accuracy ? ordered_json(*cv_accuracy) : ordered_json(nullptr);
  std::cout << j.dump() << '\n';
  return kExitOk;
}

struct EstimateFlags {
  std::string model;
  std::string correction_pool;
  std::string ranking;
  std::string query;
  std::string method;
  std::string cutoffs = "50,100,500,1000";
  std::string target;
  double bandwidth = 0.05;
  std::size_t depth = 1000;
  std::size_t cap = 200;
  std::size_t min_support = 5;
};

int cmd_estimate(const EstimateFlags& e) {
  const auto method = qfe::parse_method(e.method);
  const qfe::CutoffSchedule schedule(qfe::parse_size_list("--cutoffs", e.cutoffs));
  const auto model = qfe::load_model(e.model);
  const std::size_t n = model.class_count;
  if (qfe::is_pmc(method) && n != 2) throw qfe::Error(std::string(qfe::to_string(method)) + " is binary-only");
  const bool needs_pool = method != qfe::Method::cc;
  const bool needs_ranking = method != qfe::Method::naive;

  if (!needs_pool && !e.correction_pool.empty()) progress("note: cc uses the correction pool only for the default target");
  if (needs_pool && e.correction_pool.empty()) {
    throw qfe::Error(std::string(qfe::to_string(method)) + " needs a labelled correction pool (--correction-pool)");
  }
  if (needs_ranking && e.ranking.empty()) {
    throw qfe::Error(std::string(qfe::to_string(method)) + " needs the unlabelled ranking (--ranking)");
  }
  if (!needs_ranking && !e.ranking.empty()) progress("note: naive ignores the contents of the ranking");

  std::optional<qfe::Corpus> pool;
  if (!e.correction_pool.empty()) {
    pool = qfe::load_corpus_jsonl(e.correction_pool, model.group_names);
    for (const auto& d : pool->documents) {
      if (!d.group) {
        throw qfe::Error(std::string(qfe::to_string(method)) + " needs group labels but correction pool document " +
                         d.id + " has none");
      }
    }
    if (pool->empty()) throw qfe::Error("correction pool is empty");
  }

  qfe::PrevalenceVector target;
  if (!e.target.empty()) {
    target = qfe::PrevalenceVector(qfe::detail::parse_double_list("--target", e.target));
    if (target.size() != n) throw qfe::Error("--target needs one value per group");
  } else if (pool) {
    target = qfe::prevalence_of(std::span<const qfe::Document>(pool->documents), n);
    progress("no --target given; using the correction pool's group distribution");
  } else {
    throw qfe::Error("--target is required when no correction pool is given");
  }

  // The ranking enters stripped of any group fields.
  qfe::PosteriorMatrix ranking_post(n, {});
  std::size_t ranking_size = 0;
  if (needs_ranking) {
    auto ranking = qfe::load_corpus_jsonl(e.ranking, model.group_names);
    for (auto& d : ranking.documents) d.group.reset();
    if (ranking.empty()) throw qfe::Error("ranking is empty");
    ranking_post = qfe::posteriors(model, ranking.documents);
    ranking_size = ranking.size();
  }

  qfe::PosteriorMatrix corr_post(n, {});
  std::vector<std::size_t> corr_labels;
  // Whole-pool statistics stand in for classes the correction sample misses.
  std::optional<qfe::GlobalCorrection> global;
  std::vector<std::size_t> pool_labels;
  qfe::PosteriorMatrix pool_post(n, {});
  if (pool && needs_pool) {
    for (const auto& d : pool->documents) pool_labels.push_back(*d.group);
    pool_post = qfe::posteriors(model, pool->documents);
    global = qfe::make_global_correction(pool_post, pool_labels);
    if (e.query.empty()) throw qfe::Error("--query is required to retrieve the correction sample");
    const auto index = qfe::build_index(*pool);
    const auto ranked = qfe::retrieve(index, qfe::tokenize(e.query), e.depth);
    std::vector<std::size_t> groups;
    for (const auto& r : ranked.entries) groups.push_back(*pool->documents[r.doc].group);
    std::vector<std::size_t> rows;
    for (auto r : qfe::keep_top_per_group(groups, n, e.cap)) {
      rows.push_back(ranked.entries[r].doc);
      corr_labels.push_back(groups[r]);
    }
    if (rows.empty()) throw qfe::Error("query retrieved no documents from the correction pool");
    std::vector<qfe::Document> docs;
    for (auto r : rows) docs.push_back(pool->documents[r]);
    corr_post = qfe::posteriors(model, docs);
    progress("correction sample: " + std::to_string(rows.size()) + " documents");
  }

  ordered_json out;
  out["method"] = qfe::to_string(method);
  out["query"] = e.query;
  out["target"] = target.vector();
  out["ranking_size"] = ranking_size;
  out["correction_size"] = corr_labels.size();
  ordered_json per_k = ordered_json::object();

  if (auto variant = qfe::quantifier_for(method)) {
    qfe::FitOptions opts;
    opts.bandwidth = e.bandwidth;
    opts.cutoffs = schedule.cutoffs();
    opts.fallback = global ? &*global : nullptr;
    opts.min_class_support = e.min_support;
    const auto fitted = qfe::fit_correction(*variant, corr_post, corr_labels, opts);
    for (auto j : fitted.fallback_classes) {
      progress("class " + model.group_names.at(j) + " has fewer than " + std::to_string(e.min_support) +
               " correction documents; using whole-pool statistics");
    }
    qfe::DistributionsAtCutoff estimates;
    for (auto k : schedule.cutoffs()) {
      const auto bag = ranking_post.head(k);
      auto est = qfe::estimate(fitted, bag, k);
      per_k[std::to_string(k)] = {{"bag_size", needs_ranking ? bag.rows() : std::min(k, corr_labels.size())},
                                  {"prevalence", est.vector()}};
      estimates.emplace(k, std::move(est));
    }
    out["estimates"] = per_k;
    out["rkl"] = qfe::rkl(estimates, target, schedule);
    if (n == 2) out["rnd"] = qfe::rnd(estimates, target, schedule);
  } else {
    auto rates = qfe::estimate_pmc_rates(pool_labels, qfe::crisp_labels(pool_post),
                                         qfe::RateSource::classifier_training_set);
    if (method == qfe::Method::pmc_b_plus || method == qfe::Method::pmc_d_plus) {
      std::vector<char> present(n, 0);
      for (auto y : corr_labels) present[y] = 1;
      if (present[0] && present[1]) {
        rates = qfe::estimate_pmc_rates(corr_labels, qfe::crisp_labels(corr_post), qfe::RateSource::query_biased_lq);
      } else {
        progress("correction sample lacks a group; using whole-pool rates");
      }
    }
    qfe::DistributionsAtCutoff proxy;
    for (auto k : schedule.cutoffs()) {
      proxy.emplace(k, qfe::classify_and_count(qfe::crisp_labels(ranking_post.head(k)), n));
    }
    const double proxy_rnd = qfe::rnd(proxy, target, schedule);
    out["rnd_proxy"] = proxy_rnd;
    out["rates"] = {{"p", rates.p}, {"w", rates.w}, {"beta", rates.beta}};
    out["rnd"] = (method == qfe::Method::pmc_b || method == qfe::Method::pmc_b_plus)
                     ? qfe::pmc_b_correct(proxy_rnd, rates)
                     : qfe::pmc_d_correct(proxy_rnd, rates);
  }
  std::cout << out.dump() << '\n';
  return kExitOk;
}

ordered_json benchmark_summary(const qfe::FairnessReport& r, const fs::path& dir) {
  const auto full = qfe::report_to_json(r);
  ordered_json pools = ordered_json::array();
  for (const auto& p : full["pools"]) {
    pools.push_back({{"pool_size", p["pool_size"]}, {"queries", p["queries"].size()}, {"summary", p["summary"]}});
  }
  ordered_json files = ordered_json::array();
  for (const char* name : qfe::kReportFiles) files.push_back((dir / name).string());
  return {{"seed", r.seed}, {"files", files}, {"pools", pools}};
}

int cmd_benchmark(const Overrides& o, const std::string& out) {
  const auto config = resolve_config(o);
  const auto dir = prepare_out_dir(out);
  progress("running benchmark with seed " + std::to_string(config.protocol.seed) +
           (config.corpus ? " on corpus files" : " on the synthetic generator"));
  const auto report = qfe::run_configured_benchmark(config);
  qfe::write_report_files(report, dir);
  progress("wrote report files to " + dir.string());
  std::cout << benchmark_summary(report, dir).dump() << '\n';
  return kExitOk;
}

int cmd_report(const std::string& in) {
  const fs::path path = fs::is_directory(in) ? fs::path(in) / "report.json" : fs::path(in);
  std::ifstream f(path);
  if (!f) throw qfe::Error("cannot open " + path.string());
  ordered_json j;
  try {
    j = ordered_json::parse(f);
  } catch (const nlohmann::json::exception&) {
    throw qfe::Error(path.string() + ": malformed JSON");
  }
  if (!j.is_object() || j.value("format", "") != qfe::kReportFormat) {
    throw qfe::Error(path.string() + ": not a qfe fairness report");
  }
  ordered_json pools = ordered_json::array();
  for (const auto& p : j["pools"]) pools.push_back({{"pool_size", p["pool_size"]}, {"summary", p["summary"]}});
  std::cout << ordered_json{{"seed", j["seed"]}, {"methods", j["methods"]}, {"pools", pools}}.dump() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantification-based fairness estimation for rankings"};
  app.require_subcommand(1);

  Overrides gen_o;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "Write L.jsonl, U.jsonl and queries.tsv from a synthetic spec");
  gen->add_option("--config", gen_o.config_path, "Config file with synthetic.* keys")->check(CLI::ExistingFile);
  gen->add_option("--seed", gen_o.seed, "Random seed");
  gen->add_option("--out", gen_out, "Output directory")->required();

  TrainFlags tf;
  auto* tr = app.add_subcommand("train", "Select hyperparameters and train the group classifier");
  tr->add_option("--corpus", tf.corpus, "Labelled corpus (JSON Lines)")->required()->check(CLI::ExistingFile);
  tr->add_option("--model-out", tf.model_out, "Model file to write")->required();
  tr->add_option("--seed", tf.seed, "Seed for the cross-validation folds");
  tr->add_flag("--no-model-selection", tf.no_model_selection, "Train with --C and --class-weighting directly");
  tr->add_option("--C", tf.C, "Inverse regularisation strength")->check(CLI::PositiveNumber);
  tr->add_option("--class-weighting", tf.class_weighting, "none or balanced")
      ->check(CLI::IsMember({"none", "balanced"}));
  tr->add_option("--folds", tf.folds, "Cross-validation folds")->check(CLI::Range(2, 100));

  EstimateFlags ef;
  auto* es = app.add_subcommand("estimate", "Estimate group prevalence and fairness of one ranking");
  es->add_option("--model", ef.model, "Model file from `qfe train`")->required()->check(CLI::ExistingFile);
  es->add_option("--correction-pool", ef.correction_pool, "Labelled correction pool (JSON Lines)")
      ->check(CLI::ExistingFile);
  es->add_option("--ranking", ef.ranking, "Ranked documents to assess, best first (JSON Lines)")
      ->check(CLI::ExistingFile);
  es->add_option("--query", ef.query, "Query text used to retrieve the correction sample");
  es->add_option("--method", ef.method, "One of: " + qfe::valid_method_names())->required();
  es->add_option("--cutoffs", ef.cutoffs, "Comma-separated cutoffs");
  es->add_option("--target", ef.target, "Comma-separated target distribution");
  es->add_option("--bandwidth", ef.bandwidth, "KDEy bandwidth")->check(CLI::PositiveNumber);
  es->add_option("--depth", ef.depth, "Retrieval depth for the correction sample")->check(CLI::PositiveNumber);
  es->add_option("--cap", ef.cap, "Correction documents kept per group")->check(CLI::PositiveNumber);
  es->add_option("--min-support", ef.min_support,
                 "Classes with fewer correction documents use whole-pool statistics");

  Overrides bo;
  std::string bench_out;
  auto* be = app.add_subcommand("benchmark", "Run the full experimental protocol");
  be->add_option("--config", bo.config_path, "Run config file")->check(CLI::ExistingFile);
  be->add_option("--seed", bo.seed, "Random seed");
  be->add_option("--methods", bo.methods, "Comma-separated methods");
  be->add_option("--cutoffs", bo.cutoffs, "Comma-separated cutoffs");
  be->add_option("--pool-sizes", bo.pool_sizes, "Comma-separated correction pool sizes (K/M suffixes, full)");
  be->add_option("--out", bench_out, "Output directory")->required();

  std::string report_in;
  auto* rp = app.add_subcommand("report", "Summarize a report.json");
  rp->add_option("--in", report_in, "report.json or the directory holding it")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) return cmd_generate(gen_o, gen_out);
    if (*tr) return cmd_train(tf);
    if (*es) return cmd_estimate(ef);
    if (*be) return cmd_benchmark(bo, bench_out);
    if (*rp) return cmd_report(report_in);
  } catch (const qfe::Error& e) {
    std::cerr << "qfe: error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "qfe: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
