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

#include "trajeval/interactions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <istream>
#include <numbers>
#include <ostream>

#include "trajeval/error.hpp"
#include "trajeval/metrics.hpp"

namespace trajeval {
namespace {

struct AgentMotion {
  std::vector<Position> track;
  Vec2 displacement;
  double path_length = 0.0;
  bool is_static = false;
};

double heading_difference_deg(const Vec2& a, const Vec2& b) {
  const double c = dot(a, b) / (norm(a) * norm(b));
  return std::acos(std::clamp(c, -1.0, 1.0)) * 180.0 / std::numbers::pi;
}

double mean_distance(const AgentMotion& a, const AgentMotion& b) {
  double sum = 0.0;
  for (std::size_t t = 0; t < a.track.size(); ++t) sum += norm(a.track[t] - b.track[t]);
  return sum / static_cast<double>(a.track.size());
}

double min_distance(const AgentMotion& a, const AgentMotion& b) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < a.track.size(); ++t) best = std::min(best, norm(a.track[t] - b.track[t]));
  return best;
}

bool is_group(const AgentMotion& a, const AgentMotion& b, const InteractionThresholds& thr) {
  if (a.is_static || b.is_static) return false;
  if (heading_difference_deg(a.displacement, b.displacement) >= thr.theta_parallel_deg) return false;
  if (mean_distance(a, b) >= thr.d_group) return false;
  if (b.path_length <= 0.0) return false;
  const double ratio = a.path_length / b.path_length;
  return thr.speed_ratio_min <= ratio && ratio <= thr.speed_ratio_max;
}

// `a` relative to `b`'s direction of travel.
bool is_leader_follower(const AgentMotion& a, const AgentMotion& b,
                        const InteractionThresholds& thr) {
  if (a.is_static || b.is_static) return false;
  if (heading_difference_deg(a.displacement, b.displacement) >= thr.theta_parallel_deg) return false;
  const Vec2 dir = (1.0 / norm(b.displacement)) * b.displacement;
  double lon = 0.0, lat = 0.0;
  for (std::size_t t = 0; t < a.track.size(); ++t) {
    const Vec2 rel = a.track[t] - b.track[t];
    lon += dot(rel, dir);
    lat += std::fabs(cross(dir, rel));
  }
  const double count = static_cast<double>(a.track.size());
  const double gap = std::fabs(lon / count);
  return lat / count < thr.d_lf_lateral && thr.lf_gap_min <= gap && gap <= thr.lf_gap_max;
}

bool is_collision_avoidance(const AgentMotion& a, const AgentMotion& b,
                            const InteractionThresholds& thr) {
  if (a.is_static || b.is_static) return false;
  if (heading_difference_deg(a.displacement, b.displacement) <= thr.theta_nonparallel_deg) {
    return false;
  }
  return min_distance(a, b) < thr.d_ca;
}

void set_threshold(InteractionThresholds& thr, const std::string& key, double value,
                   const std::string& source, std::size_t lineno) {
  static const std::map<std::string, double InteractionThresholds::*> kFields = {
      {"d_group", &InteractionThresholds::d_group},
      {"theta_parallel", &InteractionThresholds::theta_parallel_deg},
      {"theta_parallel_deg", &InteractionThresholds::theta_parallel_deg},
      {"d_lf_lateral", &InteractionThresholds::d_lf_lateral},
      {"lf_gap_min", &InteractionThresholds::lf_gap_min},
      {"lf_gap_max", &InteractionThresholds::lf_gap_max},
      {"d_ca", &InteractionThresholds::d_ca},
      {"theta_nonparallel", &InteractionThresholds::theta_nonparallel_deg},
      {"theta_nonparallel_deg", &InteractionThresholds::theta_nonparallel_deg},
      {"static_disp", &InteractionThresholds::static_disp},
      {"speed_ratio_min", &InteractionThresholds::speed_ratio_min},
      {"speed_ratio_max", &InteractionThresholds::speed_ratio_max},
  };
  const auto it = kFields.find(key);
  if (it == kFields.end()) throw ParseError(source, lineno, "unknown threshold '" + key + "'");
  thr.*(it->second) = value;
}

std::string trim_copy(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace

void InteractionThresholds::validate() const {
  for (double d : {d_group, d_lf_lateral, lf_gap_max, d_ca, static_disp, speed_ratio_max}) {
    if (!(d > 0.0) || !std::isfinite(d)) throw ConfigError("interaction distances must be positive");
  }
  if (lf_gap_min < 0.0 || lf_gap_min > lf_gap_max) throw ConfigError("bad leader-follower gap range");
  if (speed_ratio_min < 0.0 || speed_ratio_min > speed_ratio_max) {
    throw ConfigError("bad speed ratio band");
  }
  for (double a : {theta_parallel_deg, theta_nonparallel_deg}) {
    if (!(a > 0.0 && a < 180.0)) throw ConfigError("interaction angles must lie in (0, 180)");
  }
}

InteractionThresholds parse_thresholds(std::istream& in, const std::string& source) {
  InteractionThresholds thr;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim_copy(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError(source, lineno, "expected key=value");
    const auto key = trim_copy(body.substr(0, eq));
    const auto raw = trim_copy(body.substr(eq + 1));
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(raw, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != raw.size()) {
      throw ParseError(source, lineno, "bad number for '" + key + "'");
    }
    set_threshold(thr, key, value, source, lineno);
  }
  thr.validate();
  return thr;
}

InteractionThresholds parse_thresholds(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return parse_thresholds(in, path.string());
}

InteractionLabels classify(const Sequence& seq, const InteractionThresholds& thr) {
  thr.validate();
  const std::size_t n_agents = seq.num_agents();
  std::vector<AgentMotion> motion(n_agents);
  for (std::size_t n = 0; n < n_agents; ++n) {
    auto& m = motion[n];
    m.track = seq.full_track(n);
    m.displacement = m.track.back() - m.track.front();
    for (std::size_t t = 1; t < m.track.size(); ++t) m.path_length += norm(m.track[t] - m.track[t - 1]);
    m.is_static = norm(m.displacement) < thr.static_disp;
  }
  InteractionLabels labels(n_agents);
  for (std::size_t n = 0; n < n_agents; ++n) {
    labels[n].is_static = motion[n].is_static;
    for (std::size_t m = 0; m < n_agents; ++m) {
      if (m == n) continue;
      labels[n].group = labels[n].group || is_group(motion[n], motion[m], thr);
      labels[n].leader_follower =
          labels[n].leader_follower || is_leader_follower(motion[n], motion[m], thr);
      labels[n].collision_avoidance =
          labels[n].collision_avoidance || is_collision_avoidance(motion[n], motion[m], thr);
    }
  }
  return labels;
}

const char* category_name(Category c) {
  switch (c) {
    case Category::kGroup: return "group";
    case Category::kLeaderFollower: return "leader_follower";
    case Category::kCollisionAvoidance: return "collision_avoidance";
    case Category::kStatic: return "static";
  }
  return "unknown";
}

const std::vector<Category>& all_categories() {
  static const std::vector<Category> kAll = {Category::kGroup, Category::kLeaderFollower,
                                             Category::kCollisionAvoidance, Category::kStatic};
  return kAll;
}

bool has_category(const AgentLabels& labels, Category c) {
  switch (c) {
    case Category::kGroup: return labels.group;
    case Category::kLeaderFollower: return labels.leader_follower;
    case Category::kCollisionAvoidance: return labels.collision_avoidance;
    case Category::kStatic: return labels.is_static;
  }
  return false;
}

CategoryStats category_stats(std::span<const Sequence> seqs, const InteractionThresholds& thr) {
  std::map<Category, std::size_t> counts;
  CategoryStats stats;
  for (const auto& seq : seqs) {
    for (const auto& l : classify(seq, thr)) {
      ++stats.total_agents;
      for (auto c : all_categories()) counts[c] += has_category(l, c) ? 1 : 0;
    }
  }
  for (auto c : all_categories()) {
    stats.proportion[category_name(c)] =
        stats.total_agents == 0
            ? 0.0
            : static_cast<double>(counts[c]) / static_cast<double>(stats.total_agents);
  }
  return stats;
}

std::map<std::string, std::optional<double>> cr_by_category(const PredictionMap& preds,
                                                            std::span<const Sequence> seqs,
                                                            const InteractionThresholds& thr,
                                                            double radius) {
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (auto c : all_categories()) acc[category_name(c)] = {0.0, 0};
  acc["aggregate"] = {0.0, 0};
  for (const auto& seq : seqs) {
    const auto it = preds.find(seq.sequence_id());
    if (it == preds.end()) continue;
    check_compatible(it->second, seq);
    const auto labels = classify(seq, thr);
    const auto rate = per_agent_collision_rate(it->second.samples(), radius);
    for (std::size_t n = 0; n < labels.size(); ++n) {
      for (auto c : all_categories()) {
        if (!has_category(labels[n], c)) continue;
        auto& [sum, count] = acc[category_name(c)];
        sum += rate[n];
        ++count;
      }
      auto& [sum, count] = acc["aggregate"];
      sum += rate[n];
      ++count;
    }
  }
  std::map<std::string, std::optional<double>> out;
  for (const auto& [name, sc] : acc) {
    out[name] = sc.second == 0 ? std::nullopt
                               : std::optional<double>(sc.first / static_cast<double>(sc.second));
  }
  return out;
}

void write_labels_csv(std::span<const Sequence> seqs, const InteractionThresholds& thr,
                      std::ostream& out) {
  out << "sequence_id,agent_id,group,leader_follower,collision_avoidance,static\n";
  for (const auto& seq : seqs) {
    const auto labels = classify(seq, thr);
    for (std::size_t n = 0; n < labels.size(); ++n) {
      const auto& l = labels[n];
      out << seq.sequence_id() << ',' << seq.agent_ids()[n] << ',' << l.group << ','
          << l.leader_follower << ',' << l.collision_avoidance << ',' << l.is_static << '\n';
    }
  }
}

}  // namespace trajeval
