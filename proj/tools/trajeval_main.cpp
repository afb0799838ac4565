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

// trajeval: evaluate multi-agent trajectory predictions, summarize ground
// truth, label interactions and run the toy training experiments.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "trajeval/error.hpp"
#include "trajeval/ingest.hpp"
#include "trajeval/interactions.hpp"
#include "trajeval/metrics.hpp"
#include "trajeval/report.hpp"
#include "trajeval/toylab.hpp"
#include "trajeval/window.hpp"

namespace fs = std::filesystem;
using namespace trajeval;

namespace {

struct DataOptions {
  std::string gt;
  WindowConfig window;
  double native_fps = 2.5;
  int phase = 0;
  bool partial_presence = false;
  Units units = Units::kMeters;
};

void add_data_options(CLI::App* cmd, DataOptions& o) {
  cmd->add_option("--gt", o.gt, "Ground-truth directory (one scene per subdirectory or .txt file) "
                                "or a single annotation file")
      ->required();
  cmd->add_option("--obs-len", o.window.obs_len, "Observed steps")->capture_default_str();
  cmd->add_option("--pred-len", o.window.pred_len, "Predicted steps")->capture_default_str();
  cmd->add_option("--stride", o.window.stride, "Window advance in frames")->capture_default_str();
  cmd->add_option("--fps", o.window.target_fps, "Evaluation frame rate")->capture_default_str();
  cmd->add_option("--native-fps", o.native_fps, "Frame rate of the annotation files")
      ->capture_default_str();
  cmd->add_option("--phase", o.phase, "Downsampling phase")->capture_default_str();
  cmd->add_flag("--partial-presence", o.partial_presence,
                "Keep agents missing early observed frames (back-filled)");
  cmd->add_option("--units", o.units, "Coordinate units")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Units>{{"meters", Units::kMeters}, {"pixels", Units::kPixels}}))
      ->default_str("meters");
}

std::vector<Sequence> load_gt(const DataOptions& o) {
  auto cfg = o.window;
  cfg.require_full_presence = !o.partial_presence;
  cfg.validate();
  const fs::path path = o.gt;
  if (fs::is_regular_file(path)) {
    return load_scene({path.stem().string(), {path}}, o.native_fps, cfg, o.units, o.phase);
  }
  return load_dataset(path, o.native_fps, cfg, o.units, o.phase);
}

// Writes to --output when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError("cannot open output file: " + path);
    }
  }
  std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

InteractionThresholds load_thresholds(const std::string& path) {
  return path.empty() ? InteractionThresholds{} : parse_thresholds(fs::path(path));
}

std::string fixed(double v, int prec = 3) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << v;
  return os.str();
}

// ---- evaluate ----

struct EvaluateOptions {
  DataOptions data;
  std::string pred;
  std::size_t samples = 20;
  double radius = kDefaultAgentRadius;
  std::vector<std::string> metrics{"ade", "fde", "jade", "jfde", "cr_mean", "cr_jade", "nll"};
  std::string format = "table";
  Weighting weighting = Weighting::kPerSequence;
  bool strict = false;
  bool squared = false;
  bool ragged = false;
  bool no_sequences = false;
  std::string output;
};

int cmd_evaluate(const EvaluateOptions& o) {
  EvalConfig cfg;
  cfg.metrics.clear();
  for (const auto& name : o.metrics) {
    const auto m = parse_metric(name);
    if (!m) throw ConfigError("unknown metric '" + name + "'");
    cfg.metrics.push_back(*m);
  }
  cfg.radius = o.radius;
  cfg.weighting = o.weighting;
  cfg.distance = o.squared ? DistanceMode::kSquared : DistanceMode::kEuclidean;
  cfg.strict = o.strict;
  if (o.samples > 0) cfg.expected_samples = o.samples;
  if (!(cfg.radius > 0.0)) throw ConfigError("--radius must be positive");

  const auto seqs = load_gt(o.data);
  PredictionParseOptions popts;
  popts.index = seqs;
  popts.use_index = true;
  popts.allow_ragged_k = o.ragged;
  const auto preds = parse_predictions(fs::path(o.pred), popts);
  const auto report = evaluate(preds, seqs, cfg);

  Sink sink(o.output);
  if (o.format == "json") {
    sink.out() << report_to_json(report, !o.no_sequences).dump(2) << "\n";
  } else if (o.format == "csv") {
    write_report_csv(report, sink.out());
  } else {
    write_report_table(report, sink.out());
  }
  if (!report.missing.empty()) {
    std::cerr << "warning: " << report.missing.size()
              << " sequence(s) have no predictions, first: " << report.missing.front() << "\n";
  }
  return 0;
}

// ---- gt-stats ----

struct GtStatsOptions {
  DataOptions data;
  double radius = kDefaultAgentRadius;
  std::string thresholds;
  std::string format = "table";
  std::string output;
};

int cmd_gt_stats(const GtStatsOptions& o) {
  if (!(o.radius > 0.0)) throw ConfigError("--radius must be positive");
  const auto thr = load_thresholds(o.thresholds);
  const auto seqs = load_gt(o.data);

  std::map<std::string, std::vector<Sequence>> by_scene;
  for (const auto& s : seqs) by_scene[s.scene_id()].push_back(s);
  const auto cr = gt_collision_rate(seqs, o.radius);

  nlohmann::ordered_json j;
  j["radius"] = o.radius;
  double cr_sum = 0.0;
  for (const auto& [scene, list] : by_scene) {
    const auto d = density_stats(list);
    const auto cats = category_stats(list, thr);
    auto& s = j["per_scene"][scene];
    s["num_sequences"] = list.size();
    s["total_agents"] = d.total_agents;
    s["mean_agents_per_sequence"] = d.mean_agents_per_sequence;
    s["gt_collision_rate"] = cr.at(scene);
    for (const auto& [name, p] : cats.proportion) s["proportion"][name] = p;
    cr_sum += cr.at(scene);
  }
  const auto all = category_stats(seqs, thr);
  const auto dens = density_stats(seqs);
  j["overall"]["num_sequences"] = seqs.size();
  j["overall"]["total_agents"] = dens.total_agents;
  j["overall"]["mean_agents_per_sequence"] = dens.mean_agents_per_sequence;
  j["overall"]["gt_collision_rate"] =
      by_scene.empty() ? 0.0 : cr_sum / static_cast<double>(by_scene.size());
  for (const auto& [name, p] : all.proportion) j["overall"]["proportion"][name] = p;

  Sink sink(o.output);
  auto& out = sink.out();
  if (o.format == "json") {
    out << j.dump(2) << "\n";
    return 0;
  }
  if (o.format == "csv") {
    out << "scope,scene,stat,value\n";
    const auto rows = [&](const std::string& scope, const std::string& scene,
                          const nlohmann::ordered_json& s) {
      for (const auto& [k, v] : s.items()) {
        if (v.is_object()) {
          for (const auto& [k2, v2] : v.items()) {
            out << scope << "," << scene << "," << k << "." << k2 << ","
                << format_double(v2.get<double>()) << "\n";
          }
        } else {
          out << scope << "," << scene << "," << k << "," << format_double(v.get<double>())
              << "\n";
        }
      }
    };
    for (const auto& [scene, s] : j["per_scene"].items()) rows("scene", scene, s);
    rows("overall", "", j["overall"]);
    return 0;
  }
  out << std::left << std::setw(12) << "scene" << std::right << std::setw(8) << "seqs"
      << std::setw(9) << "agents" << std::setw(10) << "agt/seq" << std::setw(9) << "gt_cr"
      << std::setw(8) << "group" << std::setw(8) << "lf" << std::setw(8) << "ca" << std::setw(8)
      << "static" << "\n";
  const auto line = [&](const std::string& name, const nlohmann::ordered_json& s) {
    const auto& p = s["proportion"];
    out << std::left << std::setw(12) << name << std::right << std::setw(8)
        << s["num_sequences"].get<std::size_t>() << std::setw(9)
        << s["total_agents"].get<std::size_t>() << std::setw(10)
        << fixed(s["mean_agents_per_sequence"].get<double>(), 2) << std::setw(9)
        << fixed(s["gt_collision_rate"].get<double>()) << std::setw(8)
        << fixed(p["group"].get<double>(), 2) << std::setw(8)
        << fixed(p["leader_follower"].get<double>(), 2) << std::setw(8)
        << fixed(p["collision_avoidance"].get<double>(), 2) << std::setw(8)
        << fixed(p["static"].get<double>(), 2) << "\n";
  };
  for (const auto& [scene, s] : j["per_scene"].items()) line(scene, s);
  line("average", j["overall"]);
  return 0;
}

// ---- categorize ----

struct CategorizeOptions {
  DataOptions data;
  std::string thresholds;
  std::string output;
};

int cmd_categorize(const CategorizeOptions& o) {
  const auto thr = load_thresholds(o.thresholds);
  const auto seqs = load_gt(o.data);
  Sink sink(o.output);
  write_labels_csv(seqs, thr, sink.out());
  return 0;
}

// ---- toy ----

struct ToyOptions {
  std::string scenario = "two_mode_group";
  ToyScenario sc;
  TrainOptions train;
  std::uint64_t seed = 0;
  std::vector<std::string> configs{"marginal", "marginal+joint"};
  double joint_weight = 1.0;
  std::string trace_dir;
  std::string output;
};

// Named loss configurations; terms are joined with '+'.
LossConfig parse_loss_config(const std::string& name, double joint_weight) {
  LossConfig c;
  c.reduction = Reduction::kMean;
  c.use_marginal = false;
  c.joint_weight = joint_weight;
  std::stringstream ss(name);
  std::string term;
  while (std::getline(ss, term, '+')) {
    if (term == "marginal") {
      c.use_marginal = true;
    } else if (term == "joint") {
      c.use_joint = true;
    } else if (term == "general") {
      c.use_general_recon = true;
    } else {
      throw ConfigError("unknown loss term '" + term + "' in '" + name +
                        "' (expected marginal, joint or general)");
    }
  }
  return c;
}

int cmd_toy(ToyOptions o) {
  const auto kind = parse_scenario(o.scenario);
  if (!kind) throw ConfigError("unknown scenario '" + o.scenario + "'");
  o.sc.kind = *kind;
  o.sc.seed = o.seed;
  o.train.seed = o.seed;
  o.sc.validate();
  std::vector<std::pair<std::string, LossConfig>> grid;
  for (const auto& name : o.configs) grid.emplace_back(name, parse_loss_config(name, o.joint_weight));
  if (!o.trace_dir.empty()) fs::create_directories(o.trace_dir);

  const auto data = generate_scenario(o.sc);
  std::vector<AblationRow> rows;
  for (const auto& [name, cfg] : grid) {
    const auto r = train_predictor(data, cfg, o.train);
    rows.push_back({name, r.final_eval, r.final_loss});
    if (!o.trace_dir.empty()) {
      std::string file = name;
      std::replace(file.begin(), file.end(), '+', '_');
      std::ofstream trace(fs::path(o.trace_dir) / ("trace_" + file + ".csv"));
      if (!trace) throw ConfigError("cannot write trace in " + o.trace_dir);
      write_trace_csv(r.trace, trace);
    }
  }
  Sink sink(o.output);
  write_ablation_csv(rows, sink.out());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-agent trajectory prediction evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "trajeval 0.1.0");

  const std::map<std::string, Weighting> weightings{{"per_sequence", Weighting::kPerSequence},
                                                    {"per_agent", Weighting::kPerAgent}};

  EvaluateOptions ev;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a prediction dump against ground truth");
  add_data_options(evaluate_cmd, ev.data);
  evaluate_cmd->add_option("--pred", ev.pred, "Prediction dump")->required()->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--samples", ev.samples, "Expected samples per sequence (0: any)")
      ->capture_default_str();
  evaluate_cmd->add_option("--radius", ev.radius, "Agent radius b in meters")->capture_default_str();
  evaluate_cmd->add_option("--metrics", ev.metrics, "Comma-separated metric list")
      ->delimiter(',')
      ->check(CLI::IsMember({"ade", "fde", "jade", "jfde", "cr_mean", "cr_jade", "nll"}))
      ->capture_default_str();
  evaluate_cmd->add_option("--format", ev.format)
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
  evaluate_cmd->add_option("--weighting", ev.weighting)
      ->transform(CLI::CheckedTransformer(weightings))
      ->default_str("per_sequence");
  evaluate_cmd->add_flag("--strict", ev.strict, "Fail when any sequence lacks predictions");
  evaluate_cmd->add_flag("--squared", ev.squared, "Use squared distances in ADE/FDE/JADE/JFDE");
  evaluate_cmd->add_flag("--ragged-k", ev.ragged, "Allow a different sample count per sequence");
  evaluate_cmd->add_flag("--no-sequences", ev.no_sequences, "Omit per-sequence rows from JSON");
  evaluate_cmd->add_option("--output,-o", ev.output, "Write the report here instead of stdout");
  std::uint64_t unused_seed = 0;
  evaluate_cmd->add_option("--seed", unused_seed, "Accepted for symmetry; evaluation is deterministic");

  GtStatsOptions gs;
  auto* gt_cmd = app.add_subcommand("gt-stats", "Ground-truth collision rate, density and categories");
  add_data_options(gt_cmd, gs.data);
  gt_cmd->add_option("--radius", gs.radius, "Agent radius b in meters")->capture_default_str();
  gt_cmd->add_option("--thresholds", gs.thresholds, "Interaction thresholds file")
      ->check(CLI::ExistingFile);
  gt_cmd->add_option("--format", gs.format)
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
  gt_cmd->add_option("--output,-o", gs.output);

  CategorizeOptions cat;
  auto* cat_cmd = app.add_subcommand("categorize", "Write per-agent interaction labels as CSV");
  add_data_options(cat_cmd, cat.data);
  cat_cmd->add_option("--thresholds", cat.thresholds, "Interaction thresholds file")
      ->check(CLI::ExistingFile);
  cat_cmd->add_option("--output,-o", cat.output);

  ToyOptions toy;
  auto* toy_cmd = app.add_subcommand("toy", "Train offset predictors on a synthetic scenario");
  toy_cmd->add_option("--scenario", toy.scenario)
      ->check(CLI::IsMember({"two_mode_group", "crossing_pair", "crowd"}))
      ->capture_default_str();
  toy_cmd->add_option("--seed", toy.seed, "Seed for data and initialization")->capture_default_str();
  toy_cmd->add_option("--configs", toy.configs,
                      "Loss configurations to compare, terms joined by '+'")
      ->delimiter(',')
      ->capture_default_str();
  toy_cmd->add_option("--joint-weight", toy.joint_weight)->capture_default_str();
  toy_cmd->add_option("--steps", toy.train.steps)->capture_default_str();
  toy_cmd->add_option("--lr", toy.train.lr)->capture_default_str();
  toy_cmd->add_option("--samples", toy.train.num_samples)->capture_default_str();
  toy_cmd->add_option("--trace-every", toy.train.trace_every)->capture_default_str();
  toy_cmd->add_option("--radius", toy.train.radius)->capture_default_str();
  toy_cmd->add_option("--mode-gap", toy.sc.mode_gap)->capture_default_str();
  toy_cmd->add_option("--noise", toy.sc.noise_std)->capture_default_str();
  toy_cmd->add_option("--train-seqs", toy.sc.num_train_sequences)->capture_default_str();
  toy_cmd->add_option("--eval-seqs", toy.sc.num_eval_sequences)->capture_default_str();
  toy_cmd->add_option("--trace-dir", toy.trace_dir, "Write trace_<config>.csv files here");
  toy_cmd->add_option("--output,-o", toy.output, "Summary CSV (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (evaluate_cmd->parsed()) return cmd_evaluate(ev);
    if (gt_cmd->parsed()) return cmd_gt_stats(gs);
    if (cat_cmd->parsed()) return cmd_categorize(cat);
    if (toy_cmd->parsed()) return cmd_toy(toy);
  } catch (const DivergenceError& e) {
    std::cerr << "error: training " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
