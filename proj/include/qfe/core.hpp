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

#ifndef QFE_CORE_HPP
#define QFE_CORE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace qfe {

/// Raised for invalid input or a violated precondition. Anything else that
/// escapes the library is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kSimplexTolerance = 1e-9;

inline bool is_on_simplex(std::span<const double> values,
                          double tolerance = kSimplexTolerance) {
  if (values.empty()) return false;
  double sum = 0.0;
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tolerance;
}

/// A point on the probability simplex. Construction validates; a
/// PrevalenceVector that exists is always non-negative and sums to one.
class PrevalenceVector {
 public:
  PrevalenceVector() = default;

  explicit PrevalenceVector(std::vector<double> values)
      : values_(std::move(values)) {
    if (!is_on_simplex(values_)) {
      throw Error("prevalence vector is not on the probability simplex");
    }
  }

  static PrevalenceVector uniform(std::size_t n) {
    if (n == 0) throw Error("prevalence vector needs at least one class");
    return PrevalenceVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  static PrevalenceVector one_hot(std::size_t n, std::size_t index) {
    if (index >= n) throw Error("one-hot index out of range");
    std::vector<double> v(n, 0.0);
    v[index] = 1.0;
    return PrevalenceVector(std::move(v));
  }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& vector() const { return values_; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  friend bool operator==(const PrevalenceVector&, const PrevalenceVector&) = default;

 private:
  std::vector<double> values_;
};

/// Row-major matrix of per-item class posteriors; every row lies on the
/// simplex.
class PosteriorMatrix {
 public:
  PosteriorMatrix() = default;

  PosteriorMatrix(std::size_t class_count, std::vector<double> data)
      : class_count_(class_count), data_(std::move(data)) {
    if (class_count_ == 0) throw Error("posterior matrix needs at least one class");
    if (data_.size() % class_count_ != 0) {
      throw Error("posterior matrix data is not a whole number of rows");
    }
    for (std::size_t r = 0; r < rows(); ++r) {
      if (!is_on_simplex(row(r))) throw Error("posterior row is not on the simplex");
    }
  }

  std::size_t rows() const { return class_count_ == 0 ? 0 : data_.size() / class_count_; }
  std::size_t class_count() const { return class_count_; }
  bool empty() const { return data_.empty(); }

  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data_).subspan(r * class_count_, class_count_);
  }
  std::span<const double> data() const { return data_; }

  /// Rows [0, count) as a new matrix; used to slice ranked bags at a cutoff.
  PosteriorMatrix head(std::size_t count) const {
    count = std::min(count, rows());
    PosteriorMatrix out;
    out.class_count_ = class_count_;
    out.data_.assign(data_.begin(),
                     data_.begin() + static_cast<std::ptrdiff_t>(count * class_count_));
    return out;
  }

  PosteriorMatrix select(std::span<const std::size_t> indices) const {
    PosteriorMatrix out;
    out.class_count_ = class_count_;
    out.data_.reserve(indices.size() * class_count_);
    for (std::size_t i : indices) {
      auto r = row(i);
      out.data_.insert(out.data_.end(), r.begin(), r.end());
    }
    return out;
  }

 private:
  std::size_t class_count_ = 0;
  std::vector<double> data_;
};

struct Document {
  std::string id;
  std::vector<std::string> tokens;
  std::optional<std::size_t> group;
  std::optional<bool> relevant;
};

/// Documents sharing one sensitive attribute. Group labels are dense indices
/// into group_names.
struct Corpus {
  std::vector<Document> documents;
  std::size_t class_count = 0;
  std::string attribute_name;
  std::vector<std::string> group_names;

  std::size_t size() const { return documents.size(); }
  bool empty() const { return documents.empty(); }
};

/// Checks id uniqueness, label range and the class-count invariant.
inline void validate_corpus(const Corpus& corpus) {
  if (corpus.class_count < 2) throw Error("corpus needs at least two classes");
  if (!corpus.group_names.empty() && corpus.group_names.size() != corpus.class_count) {
    throw Error("group name table does not match class count");
  }
  std::unordered_set<std::string> ids;
  ids.reserve(corpus.documents.size());
  std::optional<std::size_t> max_group;
  for (const auto& doc : corpus.documents) {
    if (!ids.insert(doc.id).second) throw Error("duplicate document id: " + doc.id);
    if (doc.group) {
      if (*doc.group >= corpus.class_count) {
        throw Error("group index out of range for document " + doc.id);
      }
      max_group = std::max(max_group.value_or(0), *doc.group);
    }
  }
  if (max_group && *max_group + 1 != corpus.class_count && corpus.group_names.empty()) {
    throw Error("class count does not match the largest group index");
  }
}

struct RankedEntry {
  std::size_t doc = 0;  // position in the indexed corpus
  std::string doc_id;
  double score = 0.0;
};

struct RankedList {
  std::string query_id;
  std::vector<RankedEntry> entries;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
};

/// Empirical class frequencies of a fully labelled slice.
inline PrevalenceVector prevalence_of(std::span<const std::size_t> groups,
                                      std::size_t class_count) {
  if (groups.empty()) throw Error("cannot count prevalence of an empty slice");
  if (class_count == 0) throw Error("class count must be positive");
  std::vector<double> counts(class_count, 0.0);
  for (std::size_t g : groups) {
    if (g >= class_count) throw Error("group index out of range");
    counts[g] += 1.0;
  }
  const double total = static_cast<double>(groups.size());
  for (double& c : counts) c /= total;
  return PrevalenceVector(std::move(counts));
}

inline PrevalenceVector prevalence_of(std::span<const Document> slice,
                                      std::size_t class_count) {
  std::vector<std::size_t> groups;
  groups.reserve(slice.size());
  for (const auto& doc : slice) {
    if (!doc.group) throw Error("unlabeled item in ground-truth count");
    groups.push_back(*doc.group);
  }
  return prevalence_of(std::span<const std::size_t>(groups), class_count);
}

/// Clip-and-renormalize. Falls back to uniform when everything clips to zero.
inline PrevalenceVector project_to_simplex(std::span<const double> raw) {
  if (raw.empty()) throw Error("cannot project an empty vector");
  std::vector<double> clipped(raw.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw[i])) throw Error("non-finite value in projection input");
    clipped[i] = std::max(raw[i], 0.0);
    sum += clipped[i];
  }
  if (sum <= 0.0) return PrevalenceVector::uniform(raw.size());
  for (double& v : clipped) v /= sum;
  return PrevalenceVector(std::move(clipped));
}

/// Euclidean projection onto the simplex (sort-and-threshold). Used by the
/// projected-gradient solvers; unlike project_to_simplex this is the true
/// nearest point.
inline std::vector<double> euclidean_simplex_projection(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    cumulative += sorted[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) theta = candidate;
  }
  std::vector<double> out(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::max(v[i] - theta, 0.0);
    sum += out[i];
  }
  for (double& x : out) x /= sum;
  return out;
}

inline std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

/// Row-wise argmax; ties go to the lowest class index.
inline std::vector<std::size_t> crisp_labels(const PosteriorMatrix& post) {
  std::vector<std::size_t> out(post.rows());
  for (std::size_t r = 0; r < post.rows(); ++r) out[r] = argmax(post.row(r));
  return out;
}

}  // namespace qfe

#endif  // QFE_CORE_HPP
