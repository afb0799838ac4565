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

// Synthetic multi-modal scenes and a minimal trainable predictor that expose
// the difference between optimizing marginal and joint best-of-K losses.
//
// Every scenario has identical histories across sequences (up to noise) and a
// small set of joint future modes chosen uniformly per sequence:
//
//   two_mode_group  two pedestrians walking side by side; both veer left or
//                   both veer right, ending mode_gap apart between modes.
//   crossing_pair   two pedestrians on perpendicular paths; one speeds up and
//                   passes first while the other slows down. Mixing the two
//                   agents' modes puts both at the crossing together.
//   crowd           two independent two_mode_group pairs (four joint modes).
//
// The predictor adds learnable per-(sample, agent, step) offsets to a
// constant-velocity extrapolation of each sequence's history, so its optimum
// is fully determined by the loss geometry.

#ifndef TRAJEVAL_TOYLAB_HPP_
#define TRAJEVAL_TOYLAB_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trajeval/losses.hpp"
#include "trajeval/types.hpp"

namespace trajeval {

enum class ScenarioKind { kTwoModeGroup, kCrossingPair, kCrowd };

const char* scenario_name(ScenarioKind kind);
std::optional<ScenarioKind> parse_scenario(const std::string& name);

struct ToyScenario {
  ScenarioKind kind = ScenarioKind::kTwoModeGroup;
  int num_train_sequences = 64;
  int num_eval_sequences = 64;
  /// Final-step separation between the modes of one agent, meters.
  double mode_gap = 2.0;
  /// Std-dev of i.i.d. Gaussian noise on every position, meters.
  double noise_std = 0.0;
  std::uint64_t seed = 0;
  int obs_len = 8;
  int pred_len = 12;
  double fps = 2.5;

  void validate() const;
};

struct ToyDataset {
  std::vector<Sequence> train;
  std::vector<Sequence> eval;
  /// Joint mode index drawn for each sequence.
  std::vector<std::size_t> train_modes;
  std::vector<std::size_t> eval_modes;
};

/// Deterministic in `scenario.seed`.
ToyDataset generate_scenario(const ToyScenario& scenario);

/// generate_scenario with the kind forced to two_mode_group.
ToyDataset gen_two_mode(ToyScenario scenario);

/// Noise-free future of every joint mode (pred_len steps per agent).
std::vector<TrackGrid> scenario_modes(const ToyScenario& scenario);

/// Noise-free shared history (obs_len steps per agent).
TrackGrid scenario_history(const ToyScenario& scenario);

/// Continues the last observed velocity of every agent for `pred_len` steps.
TrackGrid constant_velocity(const TrackGrid& history, std::size_t pred_len);

class OffsetPredictor {
 public:
  /// Offsets drawn i.i.d. from N(0, init_std^2) with the given seed.
  OffsetPredictor(std::size_t num_samples, std::size_t num_agents, std::size_t num_steps,
                  double init_std, std::uint64_t seed);
  explicit OffsetPredictor(SampleTensor offsets);

  SampleTensor predict(const TrackGrid& history) const;
  SampleTensor predict(const Sequence& seq) const { return predict(seq.obs()); }

  const SampleTensor& offsets() const { return offsets_; }
  SampleTensor& mutable_offsets() { return offsets_; }

 private:
  SampleTensor offsets_;
};

/// The predictor whose sample k gives agent n the track agent n follows in
/// joint mode `mode_of[k][n]` of the noise-free scenario. Lets mixed
/// assignments build the mix-and-match optimum of the marginal loss.
OffsetPredictor predictor_from_modes(const ToyScenario& scenario,
                                     const std::vector<std::vector<std::size_t>>& mode_of);

struct ToyMetrics {
  double ade = 0.0;
  double fde = 0.0;
  double jade = 0.0;
  double jfde = 0.0;
  double cr_mean = 0.0;
};

/// Means over sequences of the Euclidean displacement metrics and CR_mean.
ToyMetrics evaluate_predictor(const OffsetPredictor& predictor, std::span<const Sequence> seqs,
                              double radius = 0.1);

struct TrainOptions {
  std::size_t num_samples = 2;
  int steps = 2000;
  double lr = 0.05;
  /// Evaluate and record a trace row every this many steps (and at the end).
  int trace_every = 50;
  double init_std = 0.1;
  std::uint64_t seed = 0;
  double radius = 0.1;
};

struct TracePoint {
  int step = 0;
  double loss = 0.0;
  ToyMetrics eval;
};

struct TrainResult {
  OffsetPredictor predictor;
  std::vector<TracePoint> trace;
  ToyMetrics final_eval;
  double initial_loss = 0.0;
  double final_loss = 0.0;
};

/// Mean training loss over the training sequences and its gradient with
/// respect to the predictor offsets.
LossOutput training_loss(const OffsetPredictor& predictor, std::span<const Sequence> train,
                         const LossConfig& cfg);

/// Fixed-step gradient descent on the mean combined loss over the training
/// set. Throws DivergenceError on a non-finite loss.
TrainResult train_predictor(const ToyDataset& data, const LossConfig& cfg,
                            const TrainOptions& opts);

struct AblationRow {
  std::string name;
  ToyMetrics eval;
  double final_loss = 0.0;
};

/// Trains one predictor per named config on the same data and initialization.
std::vector<AblationRow> run_ablation(const ToyScenario& scenario,
                                      std::span<const std::pair<std::string, LossConfig>> grid,
                                      const TrainOptions& opts);

/// `step,loss,ade,fde,jade,jfde,cr_mean`
void write_trace_csv(std::span<const TracePoint> trace, std::ostream& out);
/// `config,ade,fde,jade,jfde,cr_mean,final_loss`
void write_ablation_csv(std::span<const AblationRow> rows, std::ostream& out);

}  // namespace trajeval

#endif  // TRAJEVAL_TOYLAB_HPP_
