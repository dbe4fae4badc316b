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

#ifndef QFE_TESTS_TEST_UTIL_HPP
#define QFE_TESTS_TEST_UTIL_HPP

#include <string>
#include <vector>

#include "qfe/core.hpp"
#include "qfe/text.hpp"

namespace qfe::testing {

inline Document doc(std::string id, const std::string& text, std::optional<std::size_t> group = std::nullopt) {
  return Document{std::move(id), tokenize(text), group, std::nullopt};
}

inline Corpus corpus_of(std::vector<Document> docs, std::size_t class_count) {
  Corpus c;
  c.documents = std::move(docs);
  c.class_count = class_count;
  for (std::size_t g = 0; g < class_count; ++g) c.group_names.push_back("g" + std::to_string(g));
  return c;
}

inline PosteriorMatrix posterior_rows(const std::vector<std::vector<double>>& rows) {
  std::vector<double> flat;
  for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
  return PosteriorMatrix(rows.empty() ? 2 : rows.front().size(), flat);
}

}  // namespace qfe::testing

#endif  // QFE_TESTS_TEST_UTIL_HPP
