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

#include "trajeval/toylab.hpp"

#include <cmath>
#include <ostream>
#include <random>

#include "trajeval/error.hpp"
#include "trajeval/ingest.hpp"
#include "trajeval/metrics.hpp"

namespace trajeval {
namespace {

constexpr double kGroupSpeed = 1.2;      // m/s
constexpr double kGroupHalfWidth = 0.4;  // lateral offset of each walker from the pair's axis
constexpr double kCrossingSpeed = 1.0;   // m/s
constexpr double kCrowdPairSpacing = 6.0;

struct Layout {
  std::size_t num_agents;
  std::size_t num_modes;
};

Layout layout(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kTwoModeGroup: return {2, 2};
    case ScenarioKind::kCrossingPair: return {2, 2};
    case ScenarioKind::kCrowd: return {4, 4};
  }
  return {0, 0};
}

// Position of agent `n` at step `tau` (tau <= 0 is history) in joint mode
// `mode`. History does not depend on the mode.
Position toy_position(const ToyScenario& sc, std::size_t n, int tau, std::size_t mode) {
  const double dt = 1.0 / sc.fps;
  const double horizon = static_cast<double>(sc.pred_len);
  const double progress = tau > 0 ? static_cast<double>(tau) / horizon : 0.0;
  switch (sc.kind) {
    case ScenarioKind::kTwoModeGroup: {
      const double lane = n == 0 ? kGroupHalfWidth : -kGroupHalfWidth;
      const double side = mode == 0 ? 1.0 : -1.0;
      return {kGroupSpeed * dt * tau, lane + side * 0.5 * sc.mode_gap * progress};
    }
    case ScenarioKind::kCrossingPair: {
      // Both reach the crossing at mid-horizon at the base speed; in mode 0
      // agent 0 hurries and agent 1 hangs back, in mode 1 the reverse.
      const double reach = kCrossingSpeed * dt * horizon / 2.0;
      const double delta = sc.mode_gap / (2.0 * horizon * dt);
      const bool fast = (n == 0) == (mode == 0);
      const double along = tau <= 0 ? kCrossingSpeed * dt * tau
                                     : (kCrossingSpeed + (fast ? delta : -delta)) * dt * tau;
      return n == 0 ? Position{-reach + along, 0.0} : Position{0.0, -reach + along};
    }
    case ScenarioKind::kCrowd: {
      const std::size_t pair = n / 2;
      const std::size_t pair_mode = pair == 0 ? (mode & 1u) : ((mode >> 1) & 1u);
      const double lane = (n % 2 == 0 ? kGroupHalfWidth : -kGroupHalfWidth);
      const double side = pair_mode == 0 ? 1.0 : -1.0;
      const double heading = pair == 0 ? 1.0 : -1.0;
      const double offset = pair == 0 ? 0.0 : kCrowdPairSpacing;
      return {heading * kGroupSpeed * dt * tau,
              offset + lane + side * 0.5 * sc.mode_gap * progress};
    }
  }
  return {};
}

ToyMetrics& operator+=(ToyMetrics& a, const ToyMetrics& b) {
  a.ade += b.ade;
  a.fde += b.fde;
  a.jade += b.jade;
  a.jfde += b.jfde;
  a.cr_mean += b.cr_mean;
  return a;
}

}  // namespace

const char* scenario_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kTwoModeGroup: return "two_mode_group";
    case ScenarioKind::kCrossingPair: return "crossing_pair";
    case ScenarioKind::kCrowd: return "crowd";
  }
  return "unknown";
}

std::optional<ScenarioKind> parse_scenario(const std::string& name) {
  for (auto k : {ScenarioKind::kTwoModeGroup, ScenarioKind::kCrossingPair, ScenarioKind::kCrowd}) {
    if (name == scenario_name(k)) return k;
  }
  return std::nullopt;
}

void ToyScenario::validate() const {
  if (!(mode_gap > 0.0)) throw ConfigError("mode_gap must be positive");
  if (!(noise_std >= 0.0)) throw ConfigError("noise_std must be non-negative");
  if (num_train_sequences < 1 || num_eval_sequences < 1) {
    throw ConfigError("toy scenario needs at least one train and one eval sequence");
  }
  if (obs_len < 2) throw ConfigError("toy scenario needs obs_len >= 2 for velocity");
  if (pred_len < 1) throw ConfigError("pred_len must be >= 1");
  if (!(fps > 0.0)) throw ConfigError("fps must be positive");
  if (kind == ScenarioKind::kCrossingPair &&
      mode_gap >= 2.0 * kCrossingSpeed * static_cast<double>(pred_len) / fps) {
    throw ConfigError("crossing_pair mode_gap too large: the slow agent would reverse");
  }
}

TrackGrid scenario_history(const ToyScenario& sc) {
  const auto lay = layout(sc.kind);
  TrackGrid g(lay.num_agents, static_cast<std::size_t>(sc.obs_len));
  for (std::size_t n = 0; n < lay.num_agents; ++n) {
    for (int i = 0; i < sc.obs_len; ++i) {
      g.at(n, static_cast<std::size_t>(i)) = toy_position(sc, n, i - sc.obs_len + 1, 0);
    }
  }
  return g;
}

std::vector<TrackGrid> scenario_modes(const ToyScenario& sc) {
  const auto lay = layout(sc.kind);
  std::vector<TrackGrid> modes;
  for (std::size_t m = 0; m < lay.num_modes; ++m) {
    TrackGrid g(lay.num_agents, static_cast<std::size_t>(sc.pred_len));
    for (std::size_t n = 0; n < lay.num_agents; ++n) {
      for (int t = 0; t < sc.pred_len; ++t) g.at(n, static_cast<std::size_t>(t)) = toy_position(sc, n, t + 1, m);
    }
    modes.push_back(std::move(g));
  }
  return modes;
}

ToyDataset generate_scenario(const ToyScenario& sc) {
  sc.validate();
  const auto lay = layout(sc.kind);
  const auto history = scenario_history(sc);
  const auto modes = scenario_modes(sc);
  std::mt19937_64 rng(sc.seed);
  std::uniform_int_distribution<std::size_t> pick_mode(0, lay.num_modes - 1);
  std::normal_distribution<double> noise(0.0, 1.0);
  const std::string scene = std::string("toy_") + scenario_name(sc.kind);

  std::vector<std::int64_t> ids(lay.num_agents);
  for (std::size_t n = 0; n < ids.size(); ++n) ids[n] = static_cast<std::int64_t>(n);

  const auto jitter = [&](Position p) {
    if (sc.noise_std > 0.0) {
      p.x += sc.noise_std * noise(rng);
      p.y += sc.noise_std * noise(rng);
    }
    return p;
  };
  const auto make = [&](const std::string& split, int index, std::size_t mode) {
    TrackGrid obs(lay.num_agents, history.num_steps());
    TrackGrid fut(lay.num_agents, modes[mode].num_steps());
    for (std::size_t n = 0; n < lay.num_agents; ++n) {
      for (std::size_t t = 0; t < obs.num_steps(); ++t) obs.at(n, t) = jitter(history.at(n, t));
      for (std::size_t t = 0; t < fut.num_steps(); ++t) fut.at(n, t) = jitter(modes[mode].at(n, t));
    }
    return Sequence(scene + ":" + split + ":" + std::to_string(index), scene, sc.fps, ids,
                    std::move(obs), std::move(fut));
  };

  ToyDataset data;
  for (int i = 0; i < sc.num_train_sequences; ++i) {
    const auto m = pick_mode(rng);
    data.train_modes.push_back(m);
    data.train.push_back(make("train", i, m));
  }
  for (int i = 0; i < sc.num_eval_sequences; ++i) {
    const auto m = pick_mode(rng);
    data.eval_modes.push_back(m);
    data.eval.push_back(make("eval", i, m));
  }
  return data;
}

ToyDataset gen_two_mode(ToyScenario scenario) {
  scenario.kind = ScenarioKind::kTwoModeGroup;
  return generate_scenario(scenario);
}

TrackGrid constant_velocity(const TrackGrid& history, std::size_t pred_len) {
  if (history.num_steps() < 2) throw ShapeError("constant velocity needs two observed steps");
  TrackGrid out(history.num_agents(), pred_len);
  const std::size_t last = history.num_steps() - 1;
  for (std::size_t n = 0; n < history.num_agents(); ++n) {
    const Vec2 v = history.at(n, last) - history.at(n, last - 1);
    for (std::size_t t = 0; t < pred_len; ++t) {
      out.at(n, t) = history.at(n, last) + static_cast<double>(t + 1) * v;
    }
  }
  return out;
}

OffsetPredictor::OffsetPredictor(std::size_t num_samples, std::size_t num_agents,
                                 std::size_t num_steps, double init_std, std::uint64_t seed)
    : offsets_(num_samples, num_agents, num_steps) {
  if (num_samples < 1) throw ConfigError("predictor needs at least one sample");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& v : offsets_.mutable_data()) {
    v.x = init_std * normal(rng);
    v.y = init_std * normal(rng);
  }
}

OffsetPredictor::OffsetPredictor(SampleTensor offsets) : offsets_(std::move(offsets)) {}

SampleTensor OffsetPredictor::predict(const TrackGrid& history) const {
  if (history.num_agents() != offsets_.num_agents()) {
    throw ShapeError("predictor agent count does not match history");
  }
  const auto cv = constant_velocity(history, offsets_.num_steps());
  SampleTensor out(offsets_.num_samples(), offsets_.num_agents(), offsets_.num_steps());
  for (std::size_t k = 0; k < out.num_samples(); ++k) {
    for (std::size_t n = 0; n < out.num_agents(); ++n) {
      for (std::size_t t = 0; t < out.num_steps(); ++t) out.at(k, n, t) = cv.at(n, t) + offsets_.at(k, n, t);
    }
  }
  return out;
}

OffsetPredictor predictor_from_modes(const ToyScenario& sc,
                                     const std::vector<std::vector<std::size_t>>& mode_of) {
  const auto modes = scenario_modes(sc);
  const auto cv = constant_velocity(scenario_history(sc), static_cast<std::size_t>(sc.pred_len));
  const std::size_t num_agents = cv.num_agents();
  SampleTensor offsets(mode_of.size(), num_agents, cv.num_steps());
  for (std::size_t k = 0; k < mode_of.size(); ++k) {
    if (mode_of[k].size() != num_agents) throw ShapeError("mode assignment has wrong agent count");
    for (std::size_t n = 0; n < num_agents; ++n) {
      const auto m = mode_of[k][n];
      if (m >= modes.size()) throw ConfigError("mode index out of range");
      for (std::size_t t = 0; t < cv.num_steps(); ++t) {
        offsets.at(k, n, t) = modes[m].at(n, t) - cv.at(n, t);
      }
    }
  }
  return OffsetPredictor(std::move(offsets));
}

ToyMetrics evaluate_predictor(const OffsetPredictor& predictor, std::span<const Sequence> seqs,
                              double radius) {
  if (seqs.empty()) throw ConfigError("no sequences to evaluate");
  ToyMetrics sum;
  for (const auto& s : seqs) {
    const auto pred = predictor.predict(s);
    sum += ToyMetrics{ade(pred, s.future()), fde(pred, s.future()), jade(pred, s.future()).value,
                      jfde(pred, s.future()).value, cr_mean(pred, radius)};
  }
  const double inv = 1.0 / static_cast<double>(seqs.size());
  return {sum.ade * inv, sum.fde * inv, sum.jade * inv, sum.jfde * inv, sum.cr_mean * inv};
}

LossOutput training_loss(const OffsetPredictor& predictor, std::span<const Sequence> train,
                         const LossConfig& cfg) {
  if (train.empty()) throw ConfigError("no training sequences");
  const auto& shape = predictor.offsets();
  LossOutput total{0.0, SampleTensor(shape.num_samples(), shape.num_agents(), shape.num_steps()), {}};
  const double inv = 1.0 / static_cast<double>(train.size());
  auto g = total.grad.mutable_data();
  for (const auto& s : train) {
    // Predictions are offsets plus a history-only term, so the gradient with
    // respect to the offsets equals the gradient with respect to predictions.
    const auto out = combined_loss(predictor.predict(s), s.future(), cfg);
    total.value += inv * out.value;
    const auto src = out.grad.data();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += inv * src[i];
  }
  return total;
}

TrainResult train_predictor(const ToyDataset& data, const LossConfig& cfg,
                            const TrainOptions& opts) {
  if (data.train.empty() || data.eval.empty()) throw ConfigError("empty toy dataset");
  if (opts.steps < 0 || opts.trace_every < 1) throw ConfigError("bad training schedule");
  if (!(opts.lr > 0.0)) throw ConfigError("learning rate must be positive");
  const auto& first = data.train.front();
  TrainResult result{OffsetPredictor(opts.num_samples, first.num_agents(), first.pred_len(),
                                     opts.init_std, opts.seed),
                     {}, {}, 0.0, 0.0};
  for (int step = 0; step <= opts.steps; ++step) {
    const auto loss = training_loss(result.predictor, data.train, cfg);
    if (!std::isfinite(loss.value)) throw DivergenceError(step, "non-finite training loss");
    if (step == 0) result.initial_loss = loss.value;
    result.final_loss = loss.value;
    if (step % opts.trace_every == 0 || step == opts.steps) {
      result.trace.push_back({step, loss.value, evaluate_predictor(result.predictor, data.eval, opts.radius)});
    }
    if (step == opts.steps) break;
    auto params = result.predictor.mutable_offsets().mutable_data();
    const auto grad = loss.grad.data();
    for (std::size_t i = 0; i < params.size(); ++i) params[i] -= opts.lr * grad[i];
  }
  result.final_eval = result.trace.back().eval;
  return result;
}

std::vector<AblationRow> run_ablation(const ToyScenario& scenario,
                                      std::span<const std::pair<std::string, LossConfig>> grid,
                                      const TrainOptions& opts) {
  const auto data = generate_scenario(scenario);
  std::vector<AblationRow> rows;
  for (const auto& [name, cfg] : grid) {
    const auto r = train_predictor(data, cfg, opts);
    rows.push_back({name, r.final_eval, r.final_loss});
  }
  return rows;
}

void write_trace_csv(std::span<const TracePoint> trace, std::ostream& out) {
  out << "step,loss,ade,fde,jade,jfde,cr_mean\n";
  for (const auto& p : trace) {
    out << p.step << ',' << format_double(p.loss) << ',' << format_double(p.eval.ade) << ','
        << format_double(p.eval.fde) << ',' << format_double(p.eval.jade) << ','
        << format_double(p.eval.jfde) << ',' << format_double(p.eval.cr_mean) << '\n';
  }
}

void write_ablation_csv(std::span<const AblationRow> rows, std::ostream& out) {
  out << "config,ade,fde,jade,jfde,cr_mean,final_loss\n";
  for (const auto& r : rows) {
    out << r.name << ',' << format_double(r.eval.ade) << ',' << format_double(r.eval.fde) << ','
        << format_double(r.eval.jade) << ',' << format_double(r.eval.jfde) << ','
        << format_double(r.eval.cr_mean) << ',' << format_double(r.final_loss) << '\n';
  }
}

}  // namespace trajeval
