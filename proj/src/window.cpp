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

#include "trajeval/window.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <map>
#include <optional>
#include <tuple>

#include "trajeval/error.hpp"

namespace trajeval {

void WindowConfig::validate() const {
  if (obs_len < 1) throw ConfigError("obs_len must be >= 1");
  if (pred_len < 1) throw ConfigError("pred_len must be >= 1");
  if (stride < 1) throw ConfigError("stride must be >= 1");
  if (!(target_fps > 0.0) || !std::isfinite(target_fps)) {
    throw ConfigError("target_fps must be positive");
  }
}

std::vector<Sequence> window_sequences(std::span<const RawRecord> records,
                                       const WindowConfig& cfg, const std::string& scene_id,
                                       Units units) {
  cfg.validate();
  std::vector<RawRecord> sorted(records.begin(), records.end());
  std::sort(sorted.begin(), sorted.end(), [](const RawRecord& a, const RawRecord& b) {
    return std::tie(a.frame, a.agent_id) < std::tie(b.frame, b.agent_id);
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].frame == sorted[i - 1].frame && sorted[i].agent_id == sorted[i - 1].agent_id) {
      throw ParseError(scene_id, 0,
                       "duplicate record for frame " + std::to_string(sorted[i].frame) +
                           ", agent " + std::to_string(sorted[i].agent_id));
    }
  }

  // Per distinct frame, the [begin, end) slice of `sorted`.
  std::vector<std::int64_t> frames;
  std::vector<std::size_t> frame_begin;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (frames.empty() || sorted[i].frame != frames.back()) {
      frames.push_back(sorted[i].frame);
      frame_begin.push_back(i);
    }
  }
  frame_begin.push_back(sorted.size());

  const auto len = static_cast<std::size_t>(cfg.window_len());
  const auto obs_len = static_cast<std::size_t>(cfg.obs_len);
  const auto pred_len = static_cast<std::size_t>(cfg.pred_len);
  std::vector<Sequence> out;
  for (std::size_t start = 0; start + len <= frames.size();
       start += static_cast<std::size_t>(cfg.stride)) {
    std::map<std::int64_t, std::vector<std::optional<Position>>> present;
    for (std::size_t w = 0; w < len; ++w) {
      for (std::size_t i = frame_begin[start + w]; i < frame_begin[start + w + 1]; ++i) {
        auto& slots = present[sorted[i].agent_id];
        if (slots.empty()) slots.resize(len);
        slots[w] = sorted[i].pos;
      }
    }

    std::vector<std::int64_t> ids;
    std::vector<Position> obs;
    std::vector<Position> fut;
    for (auto& [id, slots] : present) {
      const bool full = std::all_of(slots.begin(), slots.end(),
                                    [](const auto& p) { return p.has_value(); });
      if (!full) {
        if (cfg.require_full_presence) continue;
        const bool tail = std::all_of(slots.begin() + static_cast<std::ptrdiff_t>(obs_len) - 1,
                                      slots.end(), [](const auto& p) { return p.has_value(); });
        if (!tail) continue;
        for (std::size_t w = obs_len - 1; w-- > 0;) {
          if (!slots[w]) slots[w] = slots[w + 1];
        }
      }
      ids.push_back(id);
      for (std::size_t w = 0; w < obs_len; ++w) obs.push_back(*slots[w]);
      for (std::size_t w = obs_len; w < len; ++w) fut.push_back(*slots[w]);
    }
    if (ids.empty()) continue;
    const std::size_t n = ids.size();
    out.emplace_back(scene_id + ":" + std::to_string(frames[start]), scene_id, cfg.target_fps,
                     std::move(ids), TrackGrid(n, obs_len, std::move(obs)),
                     TrackGrid(n, pred_len, std::move(fut)), units);
  }
  return out;
}

DensityStats density_stats(std::span<const Sequence> seqs) {
  if (seqs.empty()) throw ConfigError("density_stats: no sequences");
  DensityStats s;
  for (const auto& seq : seqs) s.total_agents += seq.num_agents();
  s.mean_agents_per_sequence =
      static_cast<double>(s.total_agents) / static_cast<double>(seqs.size());
  return s;
}

std::vector<Sequence> load_scene(const SceneFiles& scene, double native_fps,
                                 const WindowConfig& cfg, Units units, int phase) {
  std::vector<RawRecord> records;
  for (const auto& file : scene.files) {
    auto part = parse_ethucy(file);
    records.insert(records.end(), part.begin(), part.end());
  }
  const auto kept = downsample(records, native_fps, cfg.target_fps, phase);
  return window_sequences(kept, cfg, scene.scene, units);
}

std::vector<Sequence> load_dataset(const std::filesystem::path& root, double native_fps,
                                   const WindowConfig& cfg, Units units, int phase) {
  std::vector<Sequence> out;
  for (const auto& scene : discover_scenes(root)) {
    auto seqs = load_scene(scene, native_fps, cfg, units, phase);
    std::move(seqs.begin(), seqs.end(), std::back_inserter(out));
  }
  return out;
}

}  // namespace trajeval
