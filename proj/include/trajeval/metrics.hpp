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

// Best-of-K displacement metrics, collision rates and KDE negative
// log-likelihood for multi-agent joint predictions.
//
// Marginal metrics (ADE/FDE) take the minimum over samples separately for
// every agent, so the best trajectories of different agents may come from
// different samples. Joint metrics (JADE/JFDE) first sum the error of all
// agents within a sample and then pick the single best sample.
//
// Every metric has two entry points: one on raw tensors (predictions K x N x T
// against an N x T ground truth) and one on PredictionSet / Sequence pairs,
// which additionally checks agent ordering.

#ifndef TRAJEVAL_METRICS_HPP_
#define TRAJEVAL_METRICS_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trajeval/geometry.hpp"
#include "trajeval/ingest.hpp"
#include "trajeval/types.hpp"

namespace trajeval {

/// Per-timestep error: plain Euclidean distance (default, reported in scene
/// units) or its square.
enum class DistanceMode { kEuclidean, kSquared };

/// A min-over-samples value and the sample that attains it. Ties go to the
/// lowest sample index.
struct MinResult {
  double value = 0.0;
  std::size_t argmin = 0;
};

double ade(const SampleTensor& pred, const TrackGrid& gt,
           DistanceMode mode = DistanceMode::kEuclidean);
double fde(const SampleTensor& pred, const TrackGrid& gt,
           DistanceMode mode = DistanceMode::kEuclidean);
MinResult jade(const SampleTensor& pred, const TrackGrid& gt,
               DistanceMode mode = DistanceMode::kEuclidean);
MinResult jfde(const SampleTensor& pred, const TrackGrid& gt,
               DistanceMode mode = DistanceMode::kEuclidean);

double ade(const PredictionSet& pred, const Sequence& gt,
           DistanceMode mode = DistanceMode::kEuclidean);
double fde(const PredictionSet& pred, const Sequence& gt,
           DistanceMode mode = DistanceMode::kEuclidean);
MinResult jade(const PredictionSet& pred, const Sequence& gt,
               DistanceMode mode = DistanceMode::kEuclidean);
MinResult jfde(const PredictionSet& pred, const Sequence& gt,
               DistanceMode mode = DistanceMode::kEuclidean);

/// Per-agent best-of-K average displacement (the terms ADE averages).
std::vector<double> per_agent_ade(const SampleTensor& pred, const TrackGrid& gt,
                                  DistanceMode mode = DistanceMode::kEuclidean);

/// For each agent, whether it collides with any other agent in `tracks`.
std::vector<bool> collision_flags(const TrackGrid& tracks, double radius);
/// Same, for joint sample k of a prediction tensor.
std::vector<bool> collision_flags(const SampleTensor& pred, std::size_t k, double radius);

/// Fraction of agents colliding with at least one other agent; 0 for N = 1.
double collision_fraction(const TrackGrid& tracks, double radius);

/// Collision fraction within the minimum-JADE sample, the argmin taken under
/// the same error convention as the reported JADE.
double cr_jade(const SampleTensor& pred, const TrackGrid& gt, double radius,
               DistanceMode mode = DistanceMode::kEuclidean);
double cr_jade(const PredictionSet& pred, const Sequence& gt, double radius,
               DistanceMode mode = DistanceMode::kEuclidean);

/// Mean over samples of the collision fraction.
double cr_mean(const SampleTensor& pred, double radius);
double cr_mean(const PredictionSet& pred, double radius);

/// For each agent, the fraction of samples in which it collides.
std::vector<double> per_agent_collision_rate(const SampleTensor& pred, double radius);

enum class Weighting { kPerSequence, kPerAgent };

/// Ground-truth futures scored as a single sample: the collision fraction per
/// scene, averaged over the scene's sequences with the given weighting.
std::map<std::string, double> gt_collision_rate(std::span<const Sequence> seqs, double radius,
                                                Weighting weighting = Weighting::kPerSequence);

struct KdeOptions {
  /// Lower bound on the kernel standard deviation along every axis, in scene
  /// units.
  double bandwidth_floor = 1e-3;
  /// When false, a kernel covariance below the floor raises instead of being
  /// clamped.
  bool clamp_bandwidth = true;
};

/// Mean over (t, n) of -log p(y*_{t,n}), p a 2D Gaussian KDE of the K sampled
/// positions at (t, n) with Scott's-rule covariance (K^{-1/3} times the sample
/// covariance). Averaging the same term once per sample index, as the textbook
/// formula does, leaves this value unchanged. Throws ConfigError if K < 2.
double kde_nll(const SampleTensor& pred, const TrackGrid& gt, const KdeOptions& opts = {});
double kde_nll(const PredictionSet& pred, const Sequence& gt, const KdeOptions& opts = {});

enum class Metric { kAde, kFde, kJade, kJfde, kCrMean, kCrJade, kNll };

std::string_view metric_name(Metric m);
std::optional<Metric> parse_metric(std::string_view name);
const std::vector<Metric>& all_metrics();

struct EvalConfig {
  std::vector<Metric> metrics = all_metrics();
  double radius = kDefaultAgentRadius;
  Weighting weighting = Weighting::kPerSequence;
  DistanceMode distance = DistanceMode::kEuclidean;
  /// Raise MissingPredictionError instead of listing uncovered sequences.
  bool strict = false;
  /// Reject prediction sets with a different sample count.
  std::optional<std::size_t> expected_samples;
  KdeOptions kde;
};

struct MetricReport {
  std::string sequence_id;
  std::string scene_id;
  std::size_t num_agents = 0;
  std::size_t num_samples = 0;
  std::map<std::string, double> per_metric;
  std::map<std::string, std::size_t> argmin_sample;
  std::vector<double> per_agent_ade;
};

struct SceneSummary {
  std::map<std::string, double> means;
  std::size_t num_sequences = 0;
  std::size_t num_agents = 0;
};

struct AggregateReport {
  Weighting weighting = Weighting::kPerSequence;
  std::vector<std::string> metrics;
  /// One entry per evaluated sequence, in input order.
  std::vector<MetricReport> sequences;
  std::map<std::string, SceneSummary> per_scene;
  /// Unweighted mean of the per-scene values (one column per scene, then the
  /// average across scenes).
  std::map<std::string, double> overall;
  /// The configured weighting applied across all sequences at once.
  std::map<std::string, double> pooled;
  std::vector<std::string> missing;
};

MetricReport evaluate_sequence(const PredictionSet& pred, const Sequence& gt,
                               const EvalConfig& cfg);

/// Evaluates every sequence that has a prediction set, in parallel over
/// sequences (capped by TRAJEVAL_THREADS). Reduction order is fixed, so the
/// report is deterministic.
AggregateReport evaluate(const PredictionMap& preds, std::span<const Sequence> seqs,
                         const EvalConfig& cfg);

}  // namespace trajeval

#endif  // TRAJEVAL_METRICS_HPP_
