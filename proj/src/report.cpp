// Copyright 2026 The trajeval Authors.
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

#include "trajeval/report.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "trajeval/ingest.hpp"

namespace trajeval {
namespace {

nlohmann::ordered_json number(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json metric_object(const std::vector<std::string>& order,
                                     const std::map<std::string, double>& values) {
  auto obj = nlohmann::ordered_json::object();
  for (const auto& name : order) {
    const auto it = values.find(name);
    if (it != values.end()) obj[name] = number(it->second);
  }
  return obj;
}

std::string csv_value(double v) { return std::isfinite(v) ? format_double(v) : std::string(); }

}  // namespace

const char* weighting_name(Weighting w) {
  return w == Weighting::kPerAgent ? "per_agent" : "per_sequence";
}

nlohmann::ordered_json report_to_json(const AggregateReport& report, bool include_sequences) {
  nlohmann::ordered_json j;
  j["weighting"] = weighting_name(report.weighting);
  j["metrics"] = report.metrics;
  j["overall"] = metric_object(report.metrics, report.overall);
  j["pooled"] = metric_object(report.metrics, report.pooled);
  auto scenes = nlohmann::ordered_json::object();
  for (const auto& [scene, s] : report.per_scene) {
    scenes[scene] = {{"num_sequences", s.num_sequences},
                     {"num_agents", s.num_agents},
                     {"metrics", metric_object(report.metrics, s.means)}};
  }
  j["per_scene"] = scenes;
  if (include_sequences) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : report.sequences) {
      nlohmann::ordered_json row;
      row["sequence_id"] = r.sequence_id;
      row["scene_id"] = r.scene_id;
      row["num_agents"] = r.num_agents;
      row["num_samples"] = r.num_samples;
      row["metrics"] = metric_object(report.metrics, r.per_metric);
      auto argmin = nlohmann::ordered_json::object();
      for (const auto& [name, k] : r.argmin_sample) argmin[name] = k;
      row["argmin_sample"] = argmin;
      auto per_agent = nlohmann::ordered_json::array();
      for (double v : r.per_agent_ade) per_agent.push_back(number(v));
      row["per_agent_ade"] = per_agent;
      rows.push_back(std::move(row));
    }
    j["sequences"] = rows;
  }
  j["missing"] = report.missing;
  return j;
}

void write_report_csv(const AggregateReport& report, std::ostream& out) {
  out << "scope,scene,metric,value\n";
  for (const auto& [scene, s] : report.per_scene) {
    for (const auto& name : report.metrics) {
      out << "scene," << scene << ',' << name << ',' << csv_value(s.means.at(name)) << '\n';
    }
  }
  for (const auto& name : report.metrics) {
    if (report.overall.count(name)) {
      out << "overall,," << name << ',' << csv_value(report.overall.at(name)) << '\n';
    }
  }
  for (const auto& name : report.metrics) {
    if (report.pooled.count(name)) {
      out << "pooled,," << name << ',' << csv_value(report.pooled.at(name)) << '\n';
    }
  }
}

void write_report_table(const AggregateReport& report, std::ostream& out) {
  const auto flags = out.flags();
  out << std::left << std::setw(16) << "scene" << std::right << std::setw(7) << "seqs"
      << std::setw(8) << "agents";
  for (const auto& name : report.metrics) out << std::setw(10) << name;
  out << '\n';
  out << std::fixed << std::setprecision(3);
  const auto row = [&](const std::string& label, std::size_t seqs, std::size_t agents,
                       const std::map<std::string, double>& values) {
    out << std::left << std::setw(16) << label << std::right << std::setw(7) << seqs
        << std::setw(8) << agents;
    for (const auto& name : report.metrics) {
      const auto it = values.find(name);
      if (it == values.end() || !std::isfinite(it->second)) {
        out << std::setw(10) << "-";
      } else {
        out << std::setw(10) << it->second;
      }
    }
    out << '\n';
  };
  std::size_t seqs = 0, agents = 0;
  for (const auto& [scene, s] : report.per_scene) {
    row(scene, s.num_sequences, s.num_agents, s.means);
    seqs += s.num_sequences;
    agents += s.num_agents;
  }
  row("average", seqs, agents, report.overall);
  if (!report.missing.empty()) {
    out << report.missing.size() << " sequence(s) without predictions\n";
  }
  out.flags(flags);
}

}  // namespace trajeval
