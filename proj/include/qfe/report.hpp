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

#ifndef QFE_REPORT_HPP
#define QFE_REPORT_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <string>

#include <json.hpp>

#include "qfe/protocol.hpp"

// Serialization of a FairnessReport. Everything except timings.csv is a pure
// function of the report's deterministic fields.
namespace qfe {

inline constexpr const char* kReportFormat = "qfe-fairness-report";
inline constexpr int kReportVersion = 1;

/// Marker for `method` relative to the method with the lowest mean error:
/// "best", "ddag" (not significantly different, p >= 0.01), "dag"
/// (0.001 < p < 0.01) or empty.
inline std::string significance_marker(const PoolResult& pool, const std::string& metric, Method method) {
  const auto& summaries = metric == "rkl" ? pool.ae_rkl : pool.ae_rnd;
  if (summaries.empty() || !summaries.count(method)) return {};
  auto best = summaries.begin();
  for (auto it = summaries.begin(); it != summaries.end(); ++it) {
    if (it->second.mean < best->second.mean) best = it;
  }
  if (best->first == method) return "best";
  for (const auto& e : pool.significance) {
    if (e.metric != metric || !e.p_value) continue;
    const bool pair = (e.a == method && e.b == best->first) || (e.b == method && e.a == best->first);
    if (!pair) continue;
    if (*e.p_value >= 0.01) return "ddag";
    if (*e.p_value > 0.001) return "dag";
    return {};
  }
  return {};
}

namespace detail {

inline nlohmann::ordered_json distributions_json(const DistributionsAtCutoff& d) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [k, p] : d) out[std::to_string(k)] = p.vector();
  return out;
}

inline nlohmann::ordered_json summary_json(const Summary& s) {
  return {{"mean", s.mean}, {"std", s.stdev}, {"count", s.count}};
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline nlohmann::ordered_json report_to_json(const FairnessReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["format"] = kReportFormat;
  j["version"] = kReportVersion;
  j["seed"] = r.seed;
  j["class_count"] = r.class_count;
  j["group_names"] = r.group_names;
  ordered_json methods = ordered_json::array();
  for (auto m : r.methods) methods.push_back(to_string(m));
  j["methods"] = methods;
  j["cutoffs"] = r.cutoffs;
  j["target"] = {{"source", r.target_source}, {"prevalence", r.target.vector()}};
  j["classifier"] = {{"C", r.hyperparams.C},
                     {"class_weighting", to_string(r.hyperparams.class_weighting)},
                     {"cv_accuracy", r.cv_accuracy},
                     {"training_documents", r.classifier_training_docs}};
  if (r.kdey_bandwidth) {
    ordered_json table = ordered_json::array();
    for (const auto& [h, v] : r.bandwidth_table) table.push_back({{"bandwidth", h}, {"mean_rae", v}});
    j["kdey"] = {{"bandwidth", *r.kdey_bandwidth}, {"selection", table}};
  }

  ordered_json pools = ordered_json::array();
  for (const auto& p : r.pools) {
    ordered_json pj;
    pj["pool_size"] = p.pool_size;
    ordered_json summary = ordered_json::object();
    for (const std::string metric : {"rkl", "rnd"}) {
      const auto& s = metric == "rkl" ? p.ae_rkl : p.ae_rnd;
      if (s.empty()) continue;
      ordered_json mj = ordered_json::object();
      for (auto m : r.methods) {
        if (!s.count(m)) continue;
        auto entry = detail::summary_json(s.at(m));
        entry["marker"] = significance_marker(p, metric, m);
        mj[to_string(m)] = entry;
      }
      summary["ae_" + metric] = mj;
    }
    ordered_json rae = ordered_json::object();
    for (auto m : r.methods) {
      if (!p.rae.count(m)) continue;
      ordered_json per_k = ordered_json::object();
      for (const auto& [k, s] : p.rae.at(m)) per_k[std::to_string(k)] = detail::summary_json(s);
      rae[to_string(m)] = per_k;
    }
    summary["rae"] = rae;
    pj["summary"] = summary;

    ordered_json sig = ordered_json::array();
    for (const auto& e : p.significance) {
      ordered_json ej{{"metric", e.metric}, {"a", to_string(e.a)}, {"b", to_string(e.b)}};
      ej["p_value"] = e.p_value ? ordered_json(*e.p_value) : ordered_json(nullptr);
      if (!e.note.empty()) ej["note"] = e.note;
      sig.push_back(ej);
    }
    pj["significance"] = sig;

    ordered_json queries = ordered_json::array();
    for (const auto& q : p.queries) {
      ordered_json qj;
      qj["id"] = q.query_id;
      qj["test_retrieved"] = q.test_retrieved;
      qj["correction_retrieved"] = q.correction_retrieved;
      qj["correction_kept"] = q.correction_kept;
      qj["truth"] = detail::distributions_json(q.truth);
      qj["rkl_true"] = q.rkl_true;
      if (q.rnd_true) qj["rnd_true"] = *q.rnd_true;
      ordered_json mj = ordered_json::object();
      for (const auto& m : q.methods) {
        ordered_json e = ordered_json::object();
        if (!m.estimates.empty()) e["estimates"] = detail::distributions_json(m.estimates);
        if (!m.rae.empty()) {
          ordered_json rj = ordered_json::object();
          for (const auto& [k, v] : m.rae) rj[std::to_string(k)] = v;
          e["rae"] = rj;
        }
        if (m.rkl) e["rkl"] = *m.rkl;
        if (m.rnd) e["rnd"] = *m.rnd;
        mj[to_string(m.method)] = e;
      }
      qj["methods"] = mj;
      queries.push_back(qj);
    }
    pj["queries"] = queries;
    pools.push_back(pj);
  }
  j["pools"] = pools;
  return j;
}

inline void write_rae_csv(std::ostream& out, const FairnessReport& r) {
  out << "pool_size,query_id,method,k,bag_size,rae\n";
  for (const auto& p : r.pools) {
    for (const auto& q : p.queries) {
      for (const auto& m : q.methods) {
        for (const auto& [k, v] : m.rae) {
          out << p.pool_size << ',' << q.query_id << ',' << to_string(m.method) << ',' << k << ','
              << q.bag_sizes.at(k) << ',' << detail::format_double(v) << '\n';
        }
      }
    }
  }
}

inline void write_fairness_ae_csv(std::ostream& out, const FairnessReport& r) {
  out << "pool_size,metric,method,mean_ae,std_ae,queries,marker\n";
  for (const auto& p : r.pools) {
    for (const std::string metric : {"rkl", "rnd"}) {
      const auto& s = metric == "rkl" ? p.ae_rkl : p.ae_rnd;
      for (auto m : r.methods) {
        if (!s.count(m)) continue;
        const auto& v = s.at(m);
        out << p.pool_size << ',' << metric << ',' << to_string(m) << ',' << detail::format_double(v.mean)
            << ',' << detail::format_double(v.stdev) << ',' << v.count << ','
            << significance_marker(p, metric, m) << '\n';
      }
    }
  }
}

inline void write_timings_csv(std::ostream& out, const FairnessReport& r) {
  out << "pool_size,method,queries,learn_ms_mean,predict_ms_mean\n";
  for (const auto& p : r.pools) {
    for (auto m : r.methods) {
      if (!p.timings.count(m)) continue;
      const auto& t = p.timings.at(m);
      out << p.pool_size << ',' << to_string(m) << ',' << t.queries << ','
          << detail::format_double(t.learn_ms_mean) << ',' << detail::format_double(t.predict_ms_mean) << '\n';
    }
  }
}

inline void write_run_log(std::ostream& out, const FairnessReport& r) {
  for (const auto& line : r.log) out << line << '\n';
}

inline const char* const kReportFiles[] = {"report.json", "rae.csv", "fairness_ae.csv", "timings.csv", "run.log"};

/// Writes the five output files into `dir`, which must already exist.
inline void write_report_files(const FairnessReport& r, const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error("output directory does not exist: " + dir.string());
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw Error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("report.json");
    f << report_to_json(r).dump(2) << '\n';
  }
  {
    auto f = open("rae.csv");
    write_rae_csv(f, r);
  }
  {
    auto f = open("fairness_ae.csv");
    write_fairness_ae_csv(f, r);
  }
  {
    auto f = open("timings.csv");
    write_timings_csv(f, r);
  }
  {
    auto f = open("run.log");
    write_run_log(f, r);
  }
}

}  // namespace qfe

#endif  // QFE_REPORT_HPP
