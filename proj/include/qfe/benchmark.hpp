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

#ifndef QFE_BENCHMARK_HPP
#define QFE_BENCHMARK_HPP

#include <optional>
#include <string>

#include "qfe/config.hpp"
#include "qfe/corpus_io.hpp"
#include "qfe/protocol.hpp"
#include "qfe/random.hpp"
#include "qfe/synthetic.hpp"

namespace qfe {

/// Independent synthetic generation used only to pick the KDEy bandwidth.
inline ValidationData synthetic_validation(const SyntheticSpec& spec, std::size_t docs_per_pool,
                                           std::uint64_t seed) {
  SyntheticSpec small = spec;
  small.docs_per_pool = docs_per_pool;
  small.labeled_reserve = 0;
  auto gen = generate_synthetic(small, derive_seed(seed, 404), "V");
  return {std::move(gen.labeled), std::move(gen.test), std::move(gen.queries)};
}

/// Runs the protocol on either the configured corpus files or a synthetic
/// benchmark generated from the configured seed.
inline FairnessReport run_configured_benchmark(const RunConfig& config) {
  const auto& p = config.protocol;
  if (config.corpus) {
    if (!p.kdey_bandwidth &&
        std::find(p.methods.begin(), p.methods.end(), Method::kdey) != p.methods.end()) {
      throw Error("kdey.bandwidth must be set explicitly when running on corpus files");
    }
    const auto labeled = load_corpus_jsonl(config.corpus->labeled);
    const auto test = load_corpus_jsonl(config.corpus->test, labeled.group_names);
    const auto queries = load_queries_tsv(config.corpus->queries);
    return run_protocol(p, {labeled, test, queries});
  }
  const auto gen = generate_synthetic(config.synthetic, p.seed);
  std::optional<ValidationData> validation;
  if (!p.kdey_bandwidth) validation = synthetic_validation(config.synthetic, config.validation_docs_per_pool, p.seed);
  return run_protocol(p, {gen.labeled, gen.test, gen.queries, validation ? &*validation : nullptr});
}

}  // namespace qfe

#endif  // QFE_BENCHMARK_HPP
