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

#include "trajeval/losses.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "trajeval/error.hpp"

namespace trajeval {
namespace {

std::vector<std::size_t> resolve_steps(std::span<const std::size_t> steps, std::size_t num_steps) {
  if (steps.empty()) {
    std::vector<std::size_t> all(num_steps);
    std::iota(all.begin(), all.end(), 0);
    return all;
  }
  for (auto t : steps) {
    if (t >= num_steps) throw ConfigError("loss timestep index out of range");
  }
  return {steps.begin(), steps.end()};
}

double track_sq_error(const SampleTensor& pred, const TrackGrid& gt, std::size_t k, std::size_t n,
                      const std::vector<std::size_t>& steps) {
  double sum = 0.0;
  for (auto t : steps) sum += squared_norm(pred.at(k, n, t) - gt.at(n, t));
  return sum;
}

// grad(k, n, t) += scale * 2 (y - y*) over `steps`.
void add_track_grad(SampleTensor& grad, const SampleTensor& pred, const TrackGrid& gt,
                    std::size_t k, std::size_t n, const std::vector<std::size_t>& steps,
                    double scale) {
  for (auto t : steps) grad.at(k, n, t) += (2.0 * scale) * (pred.at(k, n, t) - gt.at(n, t));
}

void accumulate(LossOutput& into, const LossOutput& term, double weight, const std::string& name) {
  into.value += weight * term.value;
  auto dst = into.grad.mutable_data();
  const auto src = term.grad.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += weight * src[i];
  for (const auto& [key, idx] : term.active_samples) into.active_samples[name] = idx;
}

}  // namespace

LossOutput general_recon(const SampleTensor& pred, const TrackGrid& gt,
                         std::span<const std::size_t> steps) {
  check_compatible(pred, gt);
  const auto ts = resolve_steps(steps, gt.num_steps());
  LossOutput out{0.0, SampleTensor(pred.num_samples(), pred.num_agents(), pred.num_steps()), {}};
  for (std::size_t n = 0; n < pred.num_agents(); ++n) {
    out.value += track_sq_error(pred, gt, 0, n, ts);
    add_track_grad(out.grad, pred, gt, 0, n, ts, 1.0);
  }
  out.active_samples["general"] = {0};
  return out;
}

LossOutput marginal_recon(const SampleTensor& pred, const TrackGrid& gt,
                          std::span<const std::size_t> steps) {
  check_compatible(pred, gt);
  const auto ts = resolve_steps(steps, gt.num_steps());
  LossOutput out{0.0, SampleTensor(pred.num_samples(), pred.num_agents(), pred.num_steps()), {}};
  auto& active = out.active_samples["marginal"];
  for (std::size_t n = 0; n < pred.num_agents(); ++n) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_k = 0;
    for (std::size_t k = 0; k < pred.num_samples(); ++k) {
      const double e = track_sq_error(pred, gt, k, n, ts);
      if (e < best) {
        best = e;
        best_k = k;
      }
    }
    out.value += best;
    add_track_grad(out.grad, pred, gt, best_k, n, ts, 1.0);
    active.push_back(best_k);
  }
  return out;
}

LossOutput joint_recon(const SampleTensor& pred, const TrackGrid& gt,
                       std::span<const std::size_t> steps) {
  check_compatible(pred, gt);
  const auto ts = resolve_steps(steps, gt.num_steps());
  LossOutput out{0.0, SampleTensor(pred.num_samples(), pred.num_agents(), pred.num_steps()), {}};
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < pred.num_samples(); ++k) {
    double e = 0.0;
    for (std::size_t n = 0; n < pred.num_agents(); ++n) e += track_sq_error(pred, gt, k, n, ts);
    if (e < best) {
      best = e;
      best_k = k;
    }
  }
  out.value = best;
  for (std::size_t n = 0; n < pred.num_agents(); ++n) {
    add_track_grad(out.grad, pred, gt, best_k, n, ts, 1.0);
  }
  out.active_samples["joint"] = {best_k};
  return out;
}

LossOutput diversity(const SampleTensor& pred, double sigma) {
  const std::size_t num_samples = pred.num_samples();
  if (num_samples < 2) throw ConfigError("diversity loss needs at least 2 samples");
  if (!(sigma > 0.0)) throw ConfigError("diversity sigma must be positive");
  LossOutput out{0.0, SampleTensor(num_samples, pred.num_agents(), pred.num_steps()), {}};
  const double pair_scale = 1.0 / static_cast<double>(num_samples * (num_samples - 1));
  // Each unordered pair appears twice in the ordered double sum.
  for (std::size_t k1 = 0; k1 < num_samples; ++k1) {
    const auto a = pred.sample(k1);
    for (std::size_t k2 = k1 + 1; k2 < num_samples; ++k2) {
      const auto b = pred.sample(k2);
      double d2 = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) d2 += squared_norm(a[i] - b[i]);
      const double dist = std::sqrt(d2);
      const double e = std::exp(-dist / sigma);
      out.value += 2.0 * pair_scale * e;
      if (dist == 0.0) continue;
      // d/da exp(-|a-b|/s) = -exp(..)/s * (a-b)/|a-b|
      const double coeff = -2.0 * pair_scale * e / (sigma * dist);
      auto ga = out.grad.mutable_data().subspan(k1 * a.size(), a.size());
      auto gb = out.grad.mutable_data().subspan(k2 * a.size(), a.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        const Vec2 diff = a[i] - b[i];
        ga[i] += coeff * diff;
        gb[i] -= coeff * diff;
      }
    }
  }
  return out;
}

void LossConfig::validate(std::size_t num_steps) const {
  if (!use_general_recon && !use_marginal && !use_joint && !diversity_sigma) {
    throw ConfigError("loss config enables no term");
  }
  if (!(joint_weight >= 0.0) || !std::isfinite(joint_weight)) {
    throw ConfigError("joint weight must be a finite non-negative number");
  }
  if (diversity_sigma && !(*diversity_sigma > 0.0)) {
    throw ConfigError("diversity sigma must be positive");
  }
  if (timestep_subset) {
    if (timestep_subset->empty()) throw ConfigError("timestep subset is empty");
    std::set<std::size_t> seen;
    for (auto t : *timestep_subset) {
      if (t < 1 || t > num_steps) throw ConfigError("timestep subset must lie in 1..T");
      if (!seen.insert(t).second) throw ConfigError("duplicate timestep in subset");
    }
  }
}

LossOutput combined_loss(const SampleTensor& pred, const TrackGrid& gt, const LossConfig& cfg) {
  check_compatible(pred, gt);
  cfg.validate(gt.num_steps());
  std::vector<std::size_t> steps;
  if (cfg.timestep_subset) {
    for (auto t : *cfg.timestep_subset) steps.push_back(t - 1);
  }
  const std::size_t num_steps = steps.empty() ? gt.num_steps() : steps.size();
  const double recon_scale =
      cfg.reduction == Reduction::kMean
          ? 1.0 / static_cast<double>(num_steps * pred.num_agents())
          : 1.0;

  LossOutput out{0.0, SampleTensor(pred.num_samples(), pred.num_agents(), pred.num_steps()), {}};
  if (cfg.use_general_recon) accumulate(out, general_recon(pred, gt, steps), recon_scale, "general");
  if (cfg.use_marginal) accumulate(out, marginal_recon(pred, gt, steps), recon_scale, "marginal");
  if (cfg.use_joint && cfg.joint_weight > 0.0) {
    accumulate(out, joint_recon(pred, gt, steps), cfg.joint_weight * recon_scale, "joint");
  }
  if (cfg.diversity_sigma) accumulate(out, diversity(pred, *cfg.diversity_sigma), 1.0, "diversity");
  return out;
}

}  // namespace trajeval
