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

// Heuristic per-agent interaction labels computed on the full (observed +
// future) ground-truth window of a sequence.
//
// An agent is labelled by whether it interacts in a given way with at least
// one other agent; labels are not exclusive. Headings come from the net
// displacement over the window, so static agents have no heading and never
// take part in heading-based categories.
//
//   static               net displacement < static_disp
//   group                some m: mean distance < d_group, heading difference
//                        < theta_parallel, path-length ratio in speed band
//   leader_follower      some moving m: heading difference < theta_parallel,
//                        mean |lateral offset| from m's heading line
//                        < d_lf_lateral, |mean longitudinal gap| along it
//                        in [lf_gap_min, lf_gap_max]
//   collision_avoidance  some moving m: min same-timestep distance < d_ca,
//                        heading difference > theta_nonparallel

#ifndef TRAJEVAL_INTERACTIONS_HPP_
#define TRAJEVAL_INTERACTIONS_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trajeval/ingest.hpp"
#include "trajeval/types.hpp"

namespace trajeval {

struct InteractionThresholds {
  double d_group = 2.0;
  double theta_parallel_deg = 15.0;
  double d_lf_lateral = 0.5;
  double lf_gap_min = 0.3;
  double lf_gap_max = 3.0;
  double d_ca = 1.0;
  double theta_nonparallel_deg = 15.0;
  double static_disp = 0.5;
  double speed_ratio_min = 0.5;
  double speed_ratio_max = 2.0;

  /// Throws ConfigError on non-positive distances or angles outside (0, 180).
  void validate() const;
};

/// Reads flat `key=value` lines ('#' comments allowed); keys are the field
/// names above. Unknown keys raise ParseError.
InteractionThresholds parse_thresholds(std::istream& in, const std::string& source = "<stream>");
InteractionThresholds parse_thresholds(const std::filesystem::path& path);

struct AgentLabels {
  bool group = false;
  bool leader_follower = false;
  bool collision_avoidance = false;
  bool is_static = false;
};

using InteractionLabels = std::vector<AgentLabels>;

InteractionLabels classify(const Sequence& seq, const InteractionThresholds& thr);

enum class Category { kGroup, kLeaderFollower, kCollisionAvoidance, kStatic };

const char* category_name(Category c);
const std::vector<Category>& all_categories();
bool has_category(const AgentLabels& labels, Category c);

struct CategoryStats {
  std::map<std::string, double> proportion;
  std::size_t total_agents = 0;
};

/// Agent-weighted proportion of agents in each category over all sequences.
CategoryStats category_stats(std::span<const Sequence> seqs, const InteractionThresholds& thr);

/// CR_mean restricted to the agents of each category (plus "aggregate" for
/// every evaluated agent). std::nullopt when a category has no members.
/// Sequences without a prediction set are skipped.
std::map<std::string, std::optional<double>> cr_by_category(const PredictionMap& preds,
                                                            std::span<const Sequence> seqs,
                                                            const InteractionThresholds& thr,
                                                            double radius);

/// CSV `sequence_id,agent_id,group,leader_follower,collision_avoidance,static`
/// with 0/1 flags.
void write_labels_csv(std::span<const Sequence> seqs, const InteractionThresholds& thr,
                      std::ostream& out);

}  // namespace trajeval

#endif  // TRAJEVAL_INTERACTIONS_HPP_
