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

#ifndef TRAJEVAL_WINDOW_HPP_
#define TRAJEVAL_WINDOW_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "trajeval/ingest.hpp"
#include "trajeval/types.hpp"

namespace trajeval {

struct WindowConfig {
  int obs_len = 8;
  int pred_len = 12;
  /// Window advance, in downsampled frames.
  int stride = 1;
  double target_fps = 2.5;
  /// When false, an agent needs only the last observed frame and every future
  /// frame; missing observed positions are back-filled from the next known one.
  bool require_full_presence = true;

  int window_len() const { return obs_len + pred_len; }
  void validate() const;
};

/// Cuts one scene's (already downsampled) records into fixed-length sequences.
///
/// Windows run over the sorted list of distinct frame numbers present in
/// `records`, so frame gaps in the source do not break a window. Sequences are
/// ordered by start frame and named "<scene_id>:<start_frame>"; agents inside a
/// sequence are ordered by id. Windows without any qualifying agent are
/// dropped. Throws ParseError on a duplicate (frame, agent_id) record.
std::vector<Sequence> window_sequences(std::span<const RawRecord> records,
                                       const WindowConfig& cfg, const std::string& scene_id,
                                       Units units = Units::kMeters);

/// Parses every file of one scene, merges their records, downsamples from
/// `native_fps` to cfg.target_fps and windows the result.
std::vector<Sequence> load_scene(const SceneFiles& scene, double native_fps,
                                 const WindowConfig& cfg, Units units = Units::kMeters,
                                 int phase = 0);

/// load_scene over discover_scenes(root), concatenated in scene order.
std::vector<Sequence> load_dataset(const std::filesystem::path& root, double native_fps,
                                   const WindowConfig& cfg, Units units = Units::kMeters,
                                   int phase = 0);

struct DensityStats {
  double mean_agents_per_sequence = 0.0;
  std::size_t total_agents = 0;
};

/// Throws ConfigError on an empty list.
DensityStats density_stats(std::span<const Sequence> seqs);

}  // namespace trajeval

#endif  // TRAJEVAL_WINDOW_HPP_
