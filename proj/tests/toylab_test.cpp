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

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "trajeval/error.hpp"
#include "trajeval/geometry.hpp"
#include "trajeval/metrics.hpp"

namespace trajeval {
namespace {

LossConfig marginal_only() {
  LossConfig c;
  c.reduction = Reduction::kMean;
  return c;
}

LossConfig marginal_and_joint() {
  LossConfig c = marginal_only();
  c.use_joint = true;
  c.joint_weight = 1.0;
  return c;
}

TEST(ScenarioTest, TwoDistinctJointFutures) {
  ToyScenario sc;
  sc.mode_gap = 2.0;
  const auto data = gen_two_mode(sc);
  std::set<std::vector<double>> futures;
  for (const auto& s : data.train) {
    std::vector<double> flat;
    for (const auto& p : s.future().data()) {
      flat.push_back(p.x);
      flat.push_back(p.y);
    }
    futures.insert(flat);
    EXPECT_EQ(s.obs().data()[0], data.train[0].obs().data()[0]);
  }
  EXPECT_EQ(futures.size(), 2u);
  const auto modes = scenario_modes(sc);
  ASSERT_EQ(modes.size(), 2u);
  for (std::size_t n = 0; n < 2; ++n) {
    EXPECT_NEAR(norm(modes[0].at(n, 11) - modes[1].at(n, 11)), 2.0, 1e-12);
    // Walkers stay side by side: both veer the same way within a mode.
    EXPECT_NEAR(modes[0].at(0, 11).y - modes[0].at(1, 11).y, 0.8, 1e-12);
  }
}

TEST(ScenarioTest, SeededRegenerationIsBitIdentical) {
  ToyScenario sc;
  sc.noise_std = 0.05;
  sc.seed = 17;
  const auto a = generate_scenario(sc), b = generate_scenario(sc);
  ASSERT_EQ(a.train.size(), b.train.size());
  EXPECT_EQ(a.train_modes, b.train_modes);
  for (std::size_t i = 0; i < a.train.size(); ++i) {
    EXPECT_EQ(a.train[i].full_track(1), b.train[i].full_track(1));
  }
  sc.seed = 18;
  EXPECT_NE(generate_scenario(sc).train_modes, a.train_modes);
}

TEST(ScenarioTest, ModeFrequenciesWithinBinomialBound) {
  ToyScenario sc;
  sc.num_train_sequences = 4000;
  sc.num_eval_sequences = 1;
  const auto data = gen_two_mode(sc);
  double ones = 0.0;
  for (auto m : data.train_modes) ones += static_cast<double>(m);
  const double n = static_cast<double>(data.train_modes.size());
  EXPECT_NEAR(ones / n, 0.5, 3.0 * std::sqrt(0.25 / n));
}

TEST(ScenarioTest, CrossingModesAreCollisionFreeAndMixesCollide) {
  ToyScenario sc;
  sc.kind = ScenarioKind::kCrossingPair;
  const auto modes = scenario_modes(sc);
  for (const auto& m : modes) EXPECT_FALSE(agents_collide(m.track(0), m.track(1), 0.1));
  // Both agents slow or both fast: they reach the crossing together.
  EXPECT_TRUE(agents_collide(modes[0].track(0), modes[1].track(1), 0.1));
  EXPECT_TRUE(agents_collide(modes[1].track(0), modes[0].track(1), 0.1));
}

TEST(ScenarioTest, Validation) {
  ToyScenario sc;
  sc.mode_gap = 0.0;
  EXPECT_THROW(generate_scenario(sc), ConfigError);
  sc.mode_gap = 2.0;
  sc.noise_std = -1.0;
  EXPECT_THROW(generate_scenario(sc), ConfigError);
  EXPECT_EQ(parse_scenario("crowd"), ScenarioKind::kCrowd);
  EXPECT_FALSE(parse_scenario("zoo").has_value());
}

TEST(ConstantVelocityTest, ExtrapolatesLastStep) {
  const TrackGrid h(1, 3, {{0, 0}, {1, 0}, {3, 1}});
  const auto cv = constant_velocity(h, 2);
  EXPECT_EQ(cv.at(0, 0), (Vec2{5, 2}));
  EXPECT_EQ(cv.at(0, 1), (Vec2{7, 3}));
}

TEST(AnalyticOptimaTest, MixAndMatchVersusConsistent) {
  ToyScenario sc;
  const auto data = gen_two_mode(sc);
  const double gap = sc.mode_gap, t = sc.pred_len;
  const auto mix = predictor_from_modes(sc, {{0, 1}, {1, 0}});
  const auto mix_eval = evaluate_predictor(mix, data.eval);
  EXPECT_NEAR(mix_eval.ade, 0.0, 1e-12);
  EXPECT_NEAR(mix_eval.jade, gap * (t + 1) / (4 * t), 1e-12);
  EXPECT_GT(mix_eval.jade, 0.2 * gap);
  const auto consistent = predictor_from_modes(sc, {{0, 0}, {1, 1}});
  const auto con_eval = evaluate_predictor(consistent, data.eval);
  EXPECT_NEAR(con_eval.jade, 0.0, 1e-12);
  // The marginal objective cannot tell the two apart; the joint one can.
  EXPECT_NEAR(training_loss(mix, data.train, marginal_only()).value, 0.0, 1e-20);
  EXPECT_NEAR(training_loss(consistent, data.train, marginal_and_joint()).value, 0.0, 1e-20);
  EXPECT_GT(training_loss(mix, data.train, marginal_and_joint()).value, 0.1);
}

TEST(TrainTest, DeterministicAndDecreasing) {
  ToyScenario sc;
  sc.num_train_sequences = 16;
  sc.num_eval_sequences = 16;
  const auto data = gen_two_mode(sc);
  TrainOptions opts;
  opts.steps = 200;
  opts.trace_every = 50;
  const auto a = train_predictor(data, marginal_and_joint(), opts);
  const auto b = train_predictor(data, marginal_and_joint(), opts);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  EXPECT_EQ(a.trace.size(), 5u);  // steps 0, 50, 100, 150, 200
  for (std::size_t i = 0; i < a.trace.size(); ++i) EXPECT_EQ(a.trace[i].loss, b.trace[i].loss);
  EXPECT_LT(a.final_loss, a.initial_loss);
}

TEST(TrainTest, DivergenceReportsStep) {
  ToyScenario sc;
  sc.num_train_sequences = 4;
  const auto data = gen_two_mode(sc);
  TrainOptions opts;
  opts.lr = 1e3;
  opts.steps = 2000;
  try {
    train_predictor(data, marginal_only(), opts);
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_GT(e.step(), 0);
  }
}

TEST(AblationTest, SingleConfigMatchesTrainPredictor) {
  ToyScenario sc;
  sc.num_train_sequences = 8;
  sc.num_eval_sequences = 8;
  TrainOptions opts;
  opts.steps = 100;
  const std::vector<std::pair<std::string, LossConfig>> grid = {{"m", marginal_only()}};
  const auto rows = run_ablation(sc, grid, opts);
  const auto direct = train_predictor(generate_scenario(sc), marginal_only(), opts);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].eval.jade, direct.final_eval.jade);
  EXPECT_EQ(rows[0].final_loss, direct.final_loss);
}

TEST(CsvTest, TraceAndAblationHeaders) {
  std::ostringstream trace, ablation;
  const std::vector<TracePoint> points = {{0, 1.5, {}}};
  write_trace_csv(points, trace);
  EXPECT_EQ(trace.str().substr(0, trace.str().find('\n')), "step,loss,ade,fde,jade,jfde,cr_mean");
  const std::vector<AblationRow> rows = {{"both", {}, 0.25}};
  write_ablation_csv(rows, ablation);
  EXPECT_EQ(ablation.str(), "config,ade,fde,jade,jfde,cr_mean,final_loss\nboth,0,0,0,0,0,0.25\n");
}

}  // namespace
}  // namespace trajeval
