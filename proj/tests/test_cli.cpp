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
#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
};

Run qfe(const std::string& args) {
  const std::string cmd = std::string(QFE_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root = fs::temp_directory_path() / "qfe_cli_test";
    fs::remove_all(root);
    fs::create_directories(root);
    write(root / "small.conf",
          "seed = 4\n"
          "synthetic.group_priors = 0.7, 0.3\n"
          "synthetic.topic_count = 4\n"
          "synthetic.docs_per_pool = 1200\n"
          "synthetic.labeled_reserve = 200\n"
          "classifier_docs_per_group = 100\n"
          "model_selection = false\n"
          "classifier.C = 10\n"
          "cutoffs = 10, 20\n"
          "retrieval_depth = 50\n"
          "lq_cap_per_group = 40\n"
          "kdey.bandwidth = 0.05\n"
          "methods = naive, cc, acc, pacc, kdey, pmc_b, pmc_b_plus, pmc_d, pmc_d_plus\n");
    const auto gen = qfe("generate --config " + (root / "small.conf").string() + " --out " + (root / "data").string());
    ASSERT_EQ(gen.code, 0);
    const auto tr = qfe("train --corpus " + (root / "data" / "L.jsonl").string() + " --model-out " +
                        (root / "model.json").string() + " --no-model-selection --C 10");
    ASSERT_EQ(tr.code, 0);
  }
  static void TearDownTestSuite() { fs::remove_all(root); }

  static std::string path(const std::string& rel) { return (root / rel).string(); }

  static fs::path root;
};

fs::path Cli::root;

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(qfe("").code, 2);
  EXPECT_EQ(qfe("--help").code, 0);
  EXPECT_EQ(qfe("frobnicate").code, 2);
  EXPECT_EQ(qfe("benchmark --out " + path("x") + " --methods cc,bogus").code, 2);
  EXPECT_EQ(qfe("estimate --model " + path("model.json") + " --method bogus").code, 2);
}

TEST_F(Cli, GenerateIsDeterministic) {
  const auto r = qfe("generate --config " + path("small.conf") + " --out " + path("again"));
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["labeled_documents"], 1400);
  EXPECT_EQ(j["query_count"], 4);
  for (const char* f : {"L.jsonl", "U.jsonl", "queries.tsv"}) {
    EXPECT_EQ(slurp(root / "data" / f), slurp(root / "again" / f)) << f;
  }
  const auto other = qfe("generate --config " + path("small.conf") + " --seed 5 --out " + path("other"));
  ASSERT_EQ(other.code, 0);
  EXPECT_NE(slurp(root / "data" / "U.jsonl"), slurp(root / "other" / "U.jsonl"));
}

TEST_F(Cli, MissingOutputParentExitsTwo) {
  EXPECT_EQ(qfe("generate --out " + path("no/such/dir")).code, 2);
}

TEST_F(Cli, TrainRejectsBadCorpora) {
  write(root / "bad.jsonl", "{\"id\": \"a\", \"text\": \"x y\", \"group\": \"g\"}\n{not json\n");
  EXPECT_EQ(qfe("train --corpus " + path("bad.jsonl") + " --model-out " + path("m.json")).code, 2);
  write(root / "unlabeled.jsonl", "{\"id\": \"a\", \"text\": \"x y\", \"group\": null}\n");
  EXPECT_EQ(qfe("train --corpus " + path("unlabeled.jsonl") + " --model-out " + path("m.json")).code, 2);
  EXPECT_EQ(qfe("train --corpus " + path("missing.jsonl") + " --model-out " + path("m.json")).code, 2);
}

TEST_F(Cli, EstimateEveryMethod) {
  const std::string base = "estimate --model " + path("model.json") + " --correction-pool " + path("data/L.jsonl") +
                           " --ranking " + path("data/U.jsonl") + " --cutoffs 10,20 --depth 50";
  std::ifstream q(root / "data" / "queries.tsv");
  std::string line;
  std::getline(q, line);
  const std::string text = line.substr(line.find('\t') + 1);
  for (const char* m : {"naive", "cc", "acc", "pacc", "kdey", "pmc_b", "pmc_b_plus", "pmc_d", "pmc_d_plus"}) {
    const auto r = qfe(base + " --method " + m + " --query \"" + text + "\"");
    ASSERT_EQ(r.code, 0) << m;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["method"], m);
    ASSERT_TRUE(j.contains("rnd")) << m;
    EXPECT_GE(j["rnd"].get<double>(), 0.0);
    if (j.contains("estimates")) {
      EXPECT_EQ(j["estimates"]["10"]["prevalence"].size(), 2u);
    }
  }
  EXPECT_EQ(qfe("estimate --model " + path("model.json") + " --method pacc --ranking " + path("data/U.jsonl")).code, 2);
  EXPECT_EQ(qfe("estimate --model " + path("model.json") + " --method cc --target 0.5,0.5").code, 2);
}

TEST_F(Cli, BenchmarkWritesReproducibleReport) {
  const auto a = qfe("benchmark --config " + path("small.conf") + " --out " + path("bench_a"));
  ASSERT_EQ(a.code, 0);
  const auto b = qfe("benchmark --config " + path("small.conf") + " --out " + path("bench_b"));
  ASSERT_EQ(b.code, 0);
  for (const char* f : {"report.json", "rae.csv", "fairness_ae.csv", "run.log"}) {
    EXPECT_EQ(slurp(root / "bench_a" / f), slurp(root / "bench_b" / f)) << f;
  }
  EXPECT_TRUE(fs::exists(root / "bench_a" / "timings.csv"));
  const auto rep = qfe("report --in " + path("bench_a"));
  ASSERT_EQ(rep.code, 0);
  const auto j = nlohmann::json::parse(rep.out);
  EXPECT_EQ(j["seed"], 4);
  EXPECT_EQ(j["methods"].size(), 9u);
  write(root / "junk.json", "{\"format\": \"other\"}");
  EXPECT_EQ(qfe("report --in " + path("junk.json")).code, 2);
}

}  // namespace
