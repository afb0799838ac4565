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

#include "trajeval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "parallel.hpp"
#include "trajeval/error.hpp"

namespace trajeval {
namespace {

double step_error(const Vec2& a, const Vec2& b, DistanceMode mode) {
  const Vec2 d = a - b;
  return mode == DistanceMode::kSquared ? squared_norm(d) : norm(d);
}

// Summed error of agent n in sample k over steps [first, last).
double track_error(const SampleTensor& pred, const TrackGrid& gt, std::size_t k, std::size_t n,
                   std::size_t first, std::size_t last, DistanceMode mode) {
  double sum = 0.0;
  for (std::size_t t = first; t < last; ++t) sum += step_error(pred.at(k, n, t), gt.at(n, t), mode);
  return sum;
}

double marginal_min(const SampleTensor& pred, const TrackGrid& gt, std::size_t first,
                    std::size_t last, DistanceMode mode) {
  check_compatible(pred, gt);
  double total = 0.0;
  for (std::size_t n = 0; n < pred.num_agents(); ++n) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < pred.num_samples(); ++k) {
      best = std::min(best, track_error(pred, gt, k, n, first, last, mode));
    }
    total += best;
  }
  return total;
}

MinResult joint_min(const SampleTensor& pred, const TrackGrid& gt, std::size_t first,
                    std::size_t last, DistanceMode mode) {
  check_compatible(pred, gt);
  MinResult best{std::numeric_limits<double>::infinity(), 0};
  for (std::size_t k = 0; k < pred.num_samples(); ++k) {
    double sum = 0.0;
    for (std::size_t n = 0; n < pred.num_agents(); ++n) {
      sum += track_error(pred, gt, k, n, first, last, mode);
    }
    if (sum < best.value) best = {sum, k};
  }
  return best;
}

// log N(y; mean, cov) for a 2x2 covariance given as its inverse and log-det.
struct Gaussian2 {
  double inv_xx, inv_xy, inv_yy, log_det;

  double log_pdf(const Vec2& d) const {
    const double q = d.x * (inv_xx * d.x + inv_xy * d.y) + d.y * (inv_xy * d.x + inv_yy * d.y);
    return -std::log(2.0 * std::numbers::pi) - 0.5 * log_det - 0.5 * q;
  }
};

Gaussian2 kernel_for(std::span<const Vec2> points, const KdeOptions& opts) {
  const double k = static_cast<double>(points.size());
  Vec2 mean;
  for (const auto& p : points) mean += p;
  mean = (1.0 / k) * mean;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& p : points) {
    const Vec2 d = p - mean;
    sxx += d.x * d.x;
    sxy += d.x * d.y;
    syy += d.y * d.y;
  }
  // Scott's factor for d = 2 is K^{-1/6}; the covariance scales by its square.
  const double scale = std::pow(k, -1.0 / 3.0) / (k - 1.0);
  const double a = sxx * scale, b = sxy * scale, c = syy * scale;

  // Eigen-decomposition of [[a, b], [b, c]].
  const double half_trace = 0.5 * (a + c);
  const double disc = std::hypot(0.5 * (a - c), b);
  double l1 = half_trace + disc;
  double l2 = half_trace - disc;
  Vec2 v1{1.0, 0.0};
  if (b != 0.0 || a < c) {
    v1 = b != 0.0 ? Vec2{l1 - c, b} : Vec2{0.0, 1.0};
    v1 = (1.0 / norm(v1)) * v1;
  }
  const Vec2 v2{-v1.y, v1.x};

  const double floor2 = opts.bandwidth_floor * opts.bandwidth_floor;
  if (l2 < floor2) {
    if (!opts.clamp_bandwidth) {
      throw ConfigError("kde_nll: kernel bandwidth below floor (degenerate samples)");
    }
    l1 = std::max(l1, floor2);
    l2 = std::max(l2, floor2);
  }
  if (!(l2 > 0.0)) throw ConfigError("kde_nll: singular kernel covariance");
  // Inverse = V diag(1/l) V^T.
  Gaussian2 g;
  g.inv_xx = v1.x * v1.x / l1 + v2.x * v2.x / l2;
  g.inv_xy = v1.x * v1.y / l1 + v2.x * v2.y / l2;
  g.inv_yy = v1.y * v1.y / l1 + v2.y * v2.y / l2;
  g.log_det = std::log(l1) + std::log(l2);
  return g;
}

double weighted_mean(const std::vector<std::pair<double, double>>& value_weight) {
  double num = 0.0, den = 0.0;
  for (const auto& [v, w] : value_weight) {
    num += v * w;
    den += w;
  }
  return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double ade(const SampleTensor& pred, const TrackGrid& gt, DistanceMode mode) {
  const double n = static_cast<double>(pred.num_agents() * pred.num_steps());
  return marginal_min(pred, gt, 0, gt.num_steps(), mode) / n;
}

double fde(const SampleTensor& pred, const TrackGrid& gt, DistanceMode mode) {
  const std::size_t last = gt.num_steps();
  return marginal_min(pred, gt, last - 1, last, mode) / static_cast<double>(pred.num_agents());
}

MinResult jade(const SampleTensor& pred, const TrackGrid& gt, DistanceMode mode) {
  auto r = joint_min(pred, gt, 0, gt.num_steps(), mode);
  r.value /= static_cast<double>(pred.num_agents() * pred.num_steps());
  return r;
}

MinResult jfde(const SampleTensor& pred, const TrackGrid& gt, DistanceMode mode) {
  const std::size_t last = gt.num_steps();
  auto r = joint_min(pred, gt, last - 1, last, mode);
  r.value /= static_cast<double>(pred.num_agents());
  return r;
}

double ade(const PredictionSet& pred, const Sequence& gt, DistanceMode mode) {
  check_compatible(pred, gt);
  return ade(pred.samples(), gt.future(), mode);
}

double fde(const PredictionSet& pred, const Sequence& gt, DistanceMode mode) {
  check_compatible(pred, gt);
  return fde(pred.samples(), gt.future(), mode);
}

MinResult jade(const PredictionSet& pred, const Sequence& gt, DistanceMode mode) {
  check_compatible(pred, gt);
  return jade(pred.samples(), gt.future(), mode);
}

MinResult jfde(const PredictionSet& pred, const Sequence& gt, DistanceMode mode) {
  check_compatible(pred, gt);
  return jfde(pred.samples(), gt.future(), mode);
}

std::vector<double> per_agent_ade(const SampleTensor& pred, const TrackGrid& gt,
                                  DistanceMode mode) {
  check_compatible(pred, gt);
  std::vector<double> out(pred.num_agents());
  for (std::size_t n = 0; n < pred.num_agents(); ++n) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < pred.num_samples(); ++k) {
      best = std::min(best, track_error(pred, gt, k, n, 0, gt.num_steps(), mode));
    }
    out[n] = best / static_cast<double>(gt.num_steps());
  }
  return out;
}

namespace {

template <typename TrackAt>
std::vector<bool> flags_impl(std::size_t num_agents, TrackAt&& track, double radius) {
  std::vector<bool> flags(num_agents, false);
  for (std::size_t n = 0; n < num_agents; ++n) {
    for (std::size_t m = n + 1; m < num_agents; ++m) {
      if (flags[n] && flags[m]) continue;
      if (agents_collide(track(n), track(m), radius)) flags[n] = flags[m] = true;
    }
  }
  return flags;
}

double fraction(const std::vector<bool>& flags) {
  if (flags.empty()) return 0.0;
  return static_cast<double>(std::count(flags.begin(), flags.end(), true)) /
         static_cast<double>(flags.size());
}

}  // namespace

std::vector<bool> collision_flags(const TrackGrid& tracks, double radius) {
  if (!(radius > 0.0)) throw ConfigError("agent radius must be positive");
  return flags_impl(tracks.num_agents(), [&](std::size_t n) { return tracks.track(n); }, radius);
}

std::vector<bool> collision_flags(const SampleTensor& pred, std::size_t k, double radius) {
  if (!(radius > 0.0)) throw ConfigError("agent radius must be positive");
  if (k >= pred.num_samples()) throw ShapeError("sample index out of range");
  return flags_impl(pred.num_agents(), [&](std::size_t n) { return pred.track(k, n); }, radius);
}

double collision_fraction(const TrackGrid& tracks, double radius) {
  return fraction(collision_flags(tracks, radius));
}

double cr_jade(const SampleTensor& pred, const TrackGrid& gt, double radius, DistanceMode mode) {
  const auto best = jade(pred, gt, mode);
  return fraction(collision_flags(pred, best.argmin, radius));
}

double cr_jade(const PredictionSet& pred, const Sequence& gt, double radius, DistanceMode mode) {
  check_compatible(pred, gt);
  return cr_jade(pred.samples(), gt.future(), radius, mode);
}

double cr_mean(const SampleTensor& pred, double radius) {
  if (pred.num_samples() == 0) throw ShapeError("prediction has no samples");
  double sum = 0.0;
  for (std::size_t k = 0; k < pred.num_samples(); ++k) {
    sum += fraction(collision_flags(pred, k, radius));
  }
  return sum / static_cast<double>(pred.num_samples());
}

double cr_mean(const PredictionSet& pred, double radius) { return cr_mean(pred.samples(), radius); }

std::vector<double> per_agent_collision_rate(const SampleTensor& pred, double radius) {
  std::vector<double> rate(pred.num_agents(), 0.0);
  for (std::size_t k = 0; k < pred.num_samples(); ++k) {
    const auto flags = collision_flags(pred, k, radius);
    for (std::size_t n = 0; n < flags.size(); ++n) rate[n] += flags[n] ? 1.0 : 0.0;
  }
  for (auto& r : rate) r /= static_cast<double>(pred.num_samples());
  return rate;
}

std::map<std::string, double> gt_collision_rate(std::span<const Sequence> seqs, double radius,
                                                Weighting weighting) {
  std::map<std::string, std::vector<std::pair<double, double>>> by_scene;
  for (const auto& s : seqs) {
    const double w = weighting == Weighting::kPerAgent ? static_cast<double>(s.num_agents()) : 1.0;
    by_scene[s.scene_id()].emplace_back(collision_fraction(s.future(), radius), w);
  }
  std::map<std::string, double> out;
  for (const auto& [scene, vw] : by_scene) out[scene] = weighted_mean(vw);
  return out;
}

double kde_nll(const SampleTensor& pred, const TrackGrid& gt, const KdeOptions& opts) {
  check_compatible(pred, gt);
  const std::size_t num_samples = pred.num_samples();
  if (num_samples < 2) throw ConfigError("kde_nll needs at least 2 samples");
  if (!(opts.bandwidth_floor > 0.0)) throw ConfigError("kde bandwidth floor must be positive");
  std::vector<Vec2> points(num_samples);
  std::vector<double> log_terms(num_samples);
  double total = 0.0;
  for (std::size_t n = 0; n < pred.num_agents(); ++n) {
    for (std::size_t t = 0; t < pred.num_steps(); ++t) {
      for (std::size_t k = 0; k < num_samples; ++k) points[k] = pred.at(k, n, t);
      const auto kernel = kernel_for(points, opts);
      double max_log = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < num_samples; ++k) {
        log_terms[k] = kernel.log_pdf(gt.at(n, t) - points[k]);
        max_log = std::max(max_log, log_terms[k]);
      }
      double acc = 0.0;
      for (double l : log_terms) acc += std::exp(l - max_log);
      const double log_density = max_log + std::log(acc) - std::log(static_cast<double>(num_samples));
      total -= log_density;
    }
  }
  return total / static_cast<double>(pred.num_agents() * pred.num_steps());
}

double kde_nll(const PredictionSet& pred, const Sequence& gt, const KdeOptions& opts) {
  check_compatible(pred, gt);
  return kde_nll(pred.samples(), gt.future(), opts);
}

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::kAde: return "ade";
    case Metric::kFde: return "fde";
    case Metric::kJade: return "jade";
    case Metric::kJfde: return "jfde";
    case Metric::kCrMean: return "cr_mean";
    case Metric::kCrJade: return "cr_jade";
    case Metric::kNll: return "nll";
  }
  return "unknown";
}

const std::vector<Metric>& all_metrics() {
  static const std::vector<Metric> kAll = {Metric::kAde,    Metric::kFde,    Metric::kJade,
                                           Metric::kJfde,   Metric::kCrMean, Metric::kCrJade,
                                           Metric::kNll};
  return kAll;
}

std::optional<Metric> parse_metric(std::string_view name) {
  for (auto m : all_metrics()) {
    if (metric_name(m) == name) return m;
  }
  return std::nullopt;
}

MetricReport evaluate_sequence(const PredictionSet& pred, const Sequence& gt,
                               const EvalConfig& cfg) {
  check_compatible(pred, gt);
  if (cfg.expected_samples && pred.num_samples() != *cfg.expected_samples) {
    throw ShapeError("sequence " + gt.sequence_id() + ": expected " +
                     std::to_string(*cfg.expected_samples) + " samples, got " +
                     std::to_string(pred.num_samples()));
  }
  const auto& samples = pred.samples();
  const auto& future = gt.future();
  MetricReport r;
  r.sequence_id = gt.sequence_id();
  r.scene_id = gt.scene_id();
  r.num_agents = gt.num_agents();
  r.num_samples = pred.num_samples();
  r.per_agent_ade = per_agent_ade(samples, future, cfg.distance);
  for (auto m : cfg.metrics) {
    const std::string name(metric_name(m));
    switch (m) {
      case Metric::kAde:
        r.per_metric[name] = ade(samples, future, cfg.distance);
        break;
      case Metric::kFde:
        r.per_metric[name] = fde(samples, future, cfg.distance);
        break;
      case Metric::kJade: {
        const auto j = jade(samples, future, cfg.distance);
        r.per_metric[name] = j.value;
        r.argmin_sample[name] = j.argmin;
        break;
      }
      case Metric::kJfde: {
        const auto j = jfde(samples, future, cfg.distance);
        r.per_metric[name] = j.value;
        r.argmin_sample[name] = j.argmin;
        break;
      }
      case Metric::kCrMean:
        r.per_metric[name] = cr_mean(samples, cfg.radius);
        break;
      case Metric::kCrJade: {
        const auto j = jade(samples, future, cfg.distance);
        r.per_metric[name] = fraction(collision_flags(samples, j.argmin, cfg.radius));
        r.argmin_sample[name] = j.argmin;
        break;
      }
      case Metric::kNll:
        r.per_metric[name] = kde_nll(samples, future, cfg.kde);
        break;
    }
  }
  return r;
}

AggregateReport evaluate(const PredictionMap& preds, std::span<const Sequence> seqs,
                         const EvalConfig& cfg) {
  if (!(cfg.radius > 0.0)) throw ConfigError("agent radius must be positive");
  if (cfg.metrics.empty()) throw ConfigError("no metrics requested");
  AggregateReport report;
  report.weighting = cfg.weighting;
  for (auto m : cfg.metrics) report.metrics.emplace_back(metric_name(m));

  std::vector<std::pair<const PredictionSet*, const Sequence*>> work;
  for (const auto& s : seqs) {
    const auto it = preds.find(s.sequence_id());
    if (it == preds.end()) {
      report.missing.push_back(s.sequence_id());
    } else {
      work.emplace_back(&it->second, &s);
    }
  }
  if (cfg.strict && !report.missing.empty()) {
    throw MissingPredictionError(std::to_string(report.missing.size()) +
                                 " sequence(s) without predictions, first: " +
                                 report.missing.front());
  }

  report.sequences.resize(work.size());
  internal::parallel_for(work.size(), [&](std::size_t i) {
    report.sequences[i] = evaluate_sequence(*work[i].first, *work[i].second, cfg);
  });

  // Fixed-order reductions keep the floating-point result reproducible.
  std::map<std::string, std::vector<const MetricReport*>> by_scene;
  for (const auto& r : report.sequences) by_scene[r.scene_id].push_back(&r);
  const auto weight = [&](const MetricReport& r) {
    return cfg.weighting == Weighting::kPerAgent ? static_cast<double>(r.num_agents) : 1.0;
  };
  for (const auto& [scene, rows] : by_scene) {
    SceneSummary summary;
    summary.num_sequences = rows.size();
    for (const auto* r : rows) summary.num_agents += r->num_agents;
    for (const auto& name : report.metrics) {
      std::vector<std::pair<double, double>> vw;
      for (const auto* r : rows) vw.emplace_back(r->per_metric.at(name), weight(*r));
      summary.means[name] = weighted_mean(vw);
    }
    report.per_scene.emplace(scene, std::move(summary));
  }
  if (!report.sequences.empty()) {
    for (const auto& name : report.metrics) {
      std::vector<std::pair<double, double>> pooled, scenes;
      for (const auto& r : report.sequences) pooled.emplace_back(r.per_metric.at(name), weight(r));
      for (const auto& [scene, s] : report.per_scene) scenes.emplace_back(s.means.at(name), 1.0);
      report.pooled[name] = weighted_mean(pooled);
      report.overall[name] = weighted_mean(scenes);
    }
  }
  return report;
}

}  // namespace trajeval
