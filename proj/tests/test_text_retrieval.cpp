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

#include <cmath>

#include "qfe/retrieval.hpp"
#include "qfe/text.hpp"
#include "test_util.hpp"

namespace qfe {
namespace {

using Tokens = std::vector<std::string>;

TEST(Tokenize, GoldenSentence) {
  EXPECT_EQ(tokenize("The running dogs run"), (Tokens{"run", "dog", "run"}));
}

TEST(Tokenize, EmptyAndStopWordsOnly) {
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize("a the of").empty());
  EXPECT_TRUE(tokenize("  ,,; ").empty());
}

TEST(Tokenize, SplitsOnPunctuationAndKeepsDigits) {
  EXPECT_EQ(tokenize("Hello,World! 2024"), (Tokens{"hello", "world", "2024"}));
  EXPECT_EQ(tokenize("caf\xc3\xa9 bar"), (Tokens{"caf\xc3\xa9", "bar"}));
}

TEST(NormalizeSuffix, Rules) {
  EXPECT_EQ(normalize_suffix("stories"), "story");
  EXPECT_EQ(normalize_suffix("boxes"), "box");
  EXPECT_EQ(normalize_suffix("classes"), "classe");
  EXPECT_EQ(normalize_suffix("glass"), "glass");
  EXPECT_EQ(normalize_suffix("status"), "status");
  EXPECT_EQ(normalize_suffix("analysis"), "analysis");
  EXPECT_EQ(normalize_suffix("walked"), "walk");
  EXPECT_EQ(normalize_suffix("stopped"), "stop");
  EXPECT_EQ(normalize_suffix("falling"), "fall");
  EXPECT_EQ(normalize_suffix("red"), "red");
  EXPECT_EQ(normalize_suffix("sing"), "sing");
  EXPECT_EQ(normalize_suffix("gas"), "gas");
}

Corpus small_corpus(const std::vector<std::string>& texts) {
  std::vector<Document> docs;
  for (std::size_t i = 0; i < texts.size(); ++i) docs.push_back(testing::doc("d" + std::to_string(i), texts[i], 0));
  return testing::corpus_of(std::move(docs), 2);
}

TEST(BuildIndex, PostingsAndLengths) {
  const auto index = build_index(small_corpus({"cat cat", "dog"}));
  ASSERT_EQ(index.postings.at("cat").size(), 1u);
  EXPECT_EQ(index.postings.at("cat")[0].doc, 0u);
  EXPECT_EQ(index.postings.at("cat")[0].term_frequency, 2u);
  EXPECT_EQ(index.postings.at("dog")[0].doc, 1u);
  EXPECT_EQ(index.postings.at("dog")[0].term_frequency, 1u);
  EXPECT_EQ(index.doc_lengths, (std::vector<std::uint32_t>{2, 1}));
  EXPECT_DOUBLE_EQ(index.avg_doc_length, 1.5);
}

TEST(BuildIndex, DegenerateCases) {
  const auto empty_doc = build_index(small_corpus({""}));
  EXPECT_EQ(empty_doc.doc_count(), 1u);
  EXPECT_TRUE(empty_doc.postings.empty());
  const auto same = build_index(small_corpus({"cat dog", "cat dog", "cat dog"}));
  for (const auto& [term, list] : same.postings) EXPECT_EQ(list.size(), 3u) << term;
  EXPECT_THROW(build_index(small_corpus({})), Error);
}

TEST(Retrieve, NoMatchingTermsGivesEmptyList) {
  const auto index = build_index(small_corpus({"cat", "dog"}));
  EXPECT_TRUE(retrieve(index, {"zebra"}, 10).empty());
}

TEST(Retrieve, SingleDocumentScore) {
  const auto index = build_index(small_corpus({"cat"}));
  const auto ranked = retrieve(index, {"cat"}, 10);
  ASSERT_EQ(ranked.size(), 1u);
  // idf = ln((1 - 1 + 0.5) / (1 + 0.5) + 1) = ln(4/3); the tf part is 1 at len = avglen.
  EXPECT_NEAR(ranked.entries[0].score, 0.2876820724517809, 1e-15);
  EXPECT_NEAR(ranked.entries[0].score, std::log(4.0 / 3.0), 1e-15);
}

TEST(Retrieve, HigherTermFrequencyRanksFirst) {
  const auto index = build_index(small_corpus({"cat dog", "cat cat", "bird fish"}));
  const auto ranked = retrieve(index, {"cat"}, 10);
  ASSERT_EQ(ranked.size(), 2u);
  EXPECT_EQ(ranked.entries[0].doc_id, "d1");
  EXPECT_GT(ranked.entries[0].score, ranked.entries[1].score);
}

TEST(Retrieve, TiesBrokenByDocumentIdAndDepthRespected) {
  const auto index = build_index(small_corpus({"cat", "cat", "cat", "dog"}));
  const auto ranked = retrieve(index, {"cat"}, 2);
  ASSERT_EQ(ranked.size(), 2u);
  EXPECT_EQ(ranked.entries[0].doc_id, "d0");
  EXPECT_EQ(ranked.entries[1].doc_id, "d1");
  EXPECT_THROW(retrieve(index, {"cat"}, 0), Error);
}

TEST(Retrieve, RepeatedQueryTermsCountOnce) {
  const auto index = build_index(small_corpus({"cat dog", "cat"}));
  const auto once = retrieve(index, {"cat"}, 5);
  const auto twice = retrieve(index, {"cat", "cat"}, 5);
  ASSERT_EQ(once.size(), twice.size());
  for (std::size_t i = 0; i < once.size(); ++i) EXPECT_DOUBLE_EQ(once.entries[i].score, twice.entries[i].score);
}

TEST(Retrieve, ScoreMatchesIndependentFormula) {
  const auto corpus = small_corpus({"apple banana apple", "banana cherry", "apple", "cherry cherry cherry date"});
  const auto index = build_index(corpus);
  const auto ranked = retrieve(index, {"apple", "cherry"}, 10);
  const double avg = (3.0 + 2.0 + 1.0 + 4.0) / 4.0;
  auto term = [&](double df, double tf, double len) {
    const double idf = std::log((4.0 - df + 0.5) / (df + 0.5) + 1.0);
    return idf * tf * 2.2 / (tf + 1.2 * (0.25 + 0.75 * len / avg));
  };
  std::map<std::string, double> expected{{"d0", term(2, 2, 3)},
                                         {"d1", term(2, 1, 2)},
                                         {"d2", term(2, 1, 1)},
                                         {"d3", term(2, 3, 4)}};
  ASSERT_EQ(ranked.size(), 4u);
  for (const auto& e : ranked.entries) EXPECT_NEAR(e.score, expected.at(e.doc_id), 1e-12);
  for (std::size_t i = 1; i < ranked.size(); ++i) EXPECT_GE(ranked.entries[i - 1].score, ranked.entries[i].score);
}

}  // namespace
}  // namespace qfe
