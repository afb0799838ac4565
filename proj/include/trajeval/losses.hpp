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

// Reconstruction and diversity losses over a K x N x T prediction tensor,
// each returning its value and a subgradient with respect to every predicted
// coordinate.
//
// Reconstruction terms use squared Euclidean error summed over timesteps:
//
//   general   sum_n |y_n^(0) - y*_n|^2
//   marginal  sum_n min_k |y_n^(k) - y*_n|^2
//   joint     min_k sum_n |y_n^(k) - y*_n|^2
//
// Min-terms route the gradient only to the minimizing sample(s); ties go to
// the lowest sample index. The diversity term is
//
//   1/(K(K-1)) sum_{k1 != k2} exp(-|y^(k1) - y^(k2)| / sigma)
//
// with |.| the norm of the flattened N x T x 2 difference; its subgradient is
// taken as zero for exactly coincident sample pairs.

#ifndef TRAJEVAL_LOSSES_HPP_
#define TRAJEVAL_LOSSES_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trajeval/types.hpp"

namespace trajeval {

struct LossOutput {
  double value = 0.0;
  /// Same shape as the prediction tensor.
  SampleTensor grad;
  /// Sample indices receiving gradient, per term: one per agent for
  /// "marginal", a single index for "joint" and "general".
  std::map<std::string, std::vector<std::size_t>> active_samples;
};

/// `steps` restricts the timestep sum to the given 0-based indices (all
/// timesteps when empty).
LossOutput general_recon(const SampleTensor& pred, const TrackGrid& gt,
                         std::span<const std::size_t> steps = {});
LossOutput marginal_recon(const SampleTensor& pred, const TrackGrid& gt,
                          std::span<const std::size_t> steps = {});
LossOutput joint_recon(const SampleTensor& pred, const TrackGrid& gt,
                       std::span<const std::size_t> steps = {});

/// Throws ConfigError if K < 2 or sigma <= 0.
LossOutput diversity(const SampleTensor& pred, double sigma);

enum class Reduction { kSum, kMean };

struct LossConfig {
  bool use_general_recon = false;
  bool use_marginal = true;
  bool use_joint = false;
  /// Weight on the joint term.
  double joint_weight = 1.0;
  /// Diversity term enabled when set.
  std::optional<double> diversity_sigma;
  /// 1-based timesteps for waypoint-style losses; all timesteps when unset.
  std::optional<std::vector<std::size_t>> timestep_subset;
  /// kMean divides every reconstruction term by |timesteps| * N.
  Reduction reduction = Reduction::kSum;

  /// Throws ConfigError: no term enabled, negative weight, bad subset.
  void validate(std::size_t num_steps) const;
};

/// general + marginal + joint_weight * joint (each optionally mean-reduced),
/// plus diversity.
LossOutput combined_loss(const SampleTensor& pred, const TrackGrid& gt, const LossConfig& cfg);

}  // namespace trajeval

#endif  // TRAJEVAL_LOSSES_HPP_
