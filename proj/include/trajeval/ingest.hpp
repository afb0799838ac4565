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

// Readers and writers for annotation files and prediction dumps.
//
// Annotation files (ETH/UCY and TrajNet-style SDD) hold one record per line:
//
//   frame agent_id x y
//
// separated by arbitrary whitespace. Lines starting with '#' and blank lines
// are skipped. frame and agent_id may be written as floats ("840.0") as long
// as they are integral.
//
// Prediction dumps are UTF-8 text:
//
//   #trajeval-pred v1 K=<K> T=<T>
//   sequence_id<TAB>sample_k<TAB>agent_id<TAB>t<TAB>x<TAB>y
//   ...
//
// with sample_k in [0, K) and t in [1, T]. Other '#' lines are comments.

#ifndef TRAJEVAL_INGEST_HPP_
#define TRAJEVAL_INGEST_HPP_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trajeval/types.hpp"

namespace trajeval {

std::vector<RawRecord> parse_ethucy(std::istream& in, const std::string& source = "<stream>");
std::vector<RawRecord> parse_ethucy(const std::filesystem::path& path);

/// Keeps frames with frame % k == phase, k = native_fps / target_fps. Throws
/// ConfigError unless k is a positive integer and 0 <= phase < k.
std::vector<RawRecord> downsample(std::span<const RawRecord> records, double native_fps,
                                  double target_fps, int phase = 0);

enum class DatasetName { kEth, kHotel, kUniv, kZara1, kZara2, kSddTrajnet };

const char* to_string(DatasetName name);
std::optional<DatasetName> dataset_from_string(const std::string& name);

/// A named scene and the annotation files that make it up.
struct SceneFiles {
  std::string scene;
  std::vector<std::filesystem::path> files;
};

struct DatasetSpec {
  std::vector<SceneFiles> scenes;
  Units units = Units::kMeters;
  double native_fps = 2.5;
  std::optional<std::string> leave_out_scene;

  /// Throws ConfigError when leave_out_scene names no scene.
  void validate() const;
};

/// Leave-one-out split: every scene but the held-out one for training.
struct SceneSplit {
  std::vector<SceneFiles> train;
  std::vector<SceneFiles> test;
};
SceneSplit leave_one_out(const DatasetSpec& spec);

/// Scenes under `root`. Each subdirectory is a scene holding every `.txt` file
/// below it; top-level `.txt` files are single-file scenes named by stem.
/// Sorted by scene name.
std::vector<SceneFiles> discover_scenes(const std::filesystem::path& root);

/// Default units and frame rate of a known dataset's text release.
DatasetSpec default_spec(DatasetName name);

struct PredictionParseOptions {
  /// Permit a different sample count per sequence (each must still be 0..K_s-1
  /// complete and not exceed the header K).
  bool allow_ragged_k = false;
  /// When set, sequence ids must exist here and agent order follows it.
  std::span<const Sequence> index;
  bool use_index = false;
};

using PredictionMap = std::map<std::string, PredictionSet>;

PredictionMap parse_predictions(std::istream& in, const PredictionParseOptions& opts = {},
                                const std::string& source = "<stream>");
PredictionMap parse_predictions(const std::filesystem::path& path,
                                const PredictionParseOptions& opts = {});

/// Lines are ordered by (sequence, sample, agent, t); agents in set order.
/// Throws ConfigError when the map mixes horizons.
void write_predictions(const PredictionMap& preds, std::ostream& out);
void write_predictions(const PredictionMap& preds, const std::filesystem::path& path);

/// Shortest decimal that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace trajeval

#endif  // TRAJEVAL_INGEST_HPP_
