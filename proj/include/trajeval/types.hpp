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

// Core data model: positions, agent tracks, evaluation sequences and
// multi-sample joint predictions.

#ifndef TRAJEVAL_TYPES_HPP_
#define TRAJEVAL_TYPES_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace trajeval {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend Vec2 operator*(double s, const Vec2& v) { return {s * v.x, s * v.y}; }
  friend Vec2 operator*(const Vec2& v, double s) { return {s * v.x, s * v.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double squared_norm(const Vec2& v) { return dot(v, v); }
inline double norm(const Vec2& v) { return std::hypot(v.x, v.y); }
inline bool is_finite(const Vec2& v) { return std::isfinite(v.x) && std::isfinite(v.y); }

/// A 2D position in scene units (meters for ETH/UCY, pixels for SDD).
using Position = Vec2;

enum class Units { kMeters, kPixels };

/// Row-major agents x timesteps grid of positions.
class TrackGrid {
 public:
  TrackGrid() = default;
  TrackGrid(std::size_t num_agents, std::size_t num_steps);
  TrackGrid(std::size_t num_agents, std::size_t num_steps, std::vector<Position> data);

  std::size_t num_agents() const { return num_agents_; }
  std::size_t num_steps() const { return num_steps_; }

  const Position& at(std::size_t agent, std::size_t step) const {
    return data_[agent * num_steps_ + step];
  }
  Position& at(std::size_t agent, std::size_t step) { return data_[agent * num_steps_ + step]; }

  std::span<const Position> track(std::size_t agent) const {
    return {data_.data() + agent * num_steps_, num_steps_};
  }
  std::span<const Position> data() const { return data_; }

 private:
  std::size_t num_agents_ = 0;
  std::size_t num_steps_ = 0;
  std::vector<Position> data_;
};

/// Row-major samples x agents x timesteps tensor of 2D vectors. Holds joint
/// predictions as well as gradients with respect to them.
class SampleTensor {
 public:
  SampleTensor() = default;
  SampleTensor(std::size_t num_samples, std::size_t num_agents, std::size_t num_steps);
  SampleTensor(std::size_t num_samples, std::size_t num_agents, std::size_t num_steps,
               std::vector<Vec2> data);

  std::size_t num_samples() const { return num_samples_; }
  std::size_t num_agents() const { return num_agents_; }
  std::size_t num_steps() const { return num_steps_; }
  std::size_t size() const { return data_.size(); }

  const Vec2& at(std::size_t k, std::size_t n, std::size_t t) const {
    return data_[(k * num_agents_ + n) * num_steps_ + t];
  }
  Vec2& at(std::size_t k, std::size_t n, std::size_t t) {
    return data_[(k * num_agents_ + n) * num_steps_ + t];
  }

  std::span<const Vec2> track(std::size_t k, std::size_t n) const {
    return {data_.data() + (k * num_agents_ + n) * num_steps_, num_steps_};
  }
  /// All agents of one joint sample, agent-major.
  std::span<const Vec2> sample(std::size_t k) const {
    return {data_.data() + k * num_agents_ * num_steps_, num_agents_ * num_steps_};
  }
  std::span<const Vec2> data() const { return data_; }
  std::span<Vec2> mutable_data() { return data_; }

  bool same_shape(const SampleTensor& o) const {
    return num_samples_ == o.num_samples_ && num_agents_ == o.num_agents_ &&
           num_steps_ == o.num_steps_;
  }

 private:
  std::size_t num_samples_ = 0;
  std::size_t num_agents_ = 0;
  std::size_t num_steps_ = 0;
  std::vector<Vec2> data_;
};

/// One raw annotation line: an agent's position at a frame.
struct RawRecord {
  std::int64_t frame = 0;
  std::int64_t agent_id = 0;
  Position pos;
};

/// One evaluation unit: every agent fully present over obs_len + pred_len
/// consecutive frames. Immutable after construction.
class Sequence {
 public:
  Sequence(std::string sequence_id, std::string scene_id, double frame_rate,
           std::vector<std::int64_t> agent_ids, TrackGrid obs, TrackGrid future,
           Units units = Units::kMeters);

  const std::string& sequence_id() const { return sequence_id_; }
  const std::string& scene_id() const { return scene_id_; }
  double frame_rate() const { return frame_rate_; }
  Units units() const { return units_; }
  const std::vector<std::int64_t>& agent_ids() const { return agent_ids_; }
  std::size_t num_agents() const { return agent_ids_.size(); }
  std::size_t obs_len() const { return obs_.num_steps(); }
  std::size_t pred_len() const { return future_.num_steps(); }

  const TrackGrid& obs() const { return obs_; }
  const TrackGrid& future() const { return future_; }

  /// Observed followed by future positions of one agent.
  std::vector<Position> full_track(std::size_t agent) const;

 private:
  std::string sequence_id_;
  std::string scene_id_;
  double frame_rate_;
  std::vector<std::int64_t> agent_ids_;
  TrackGrid obs_;
  TrackGrid future_;
  Units units_;
};

/// K joint samples of future positions for every agent of one sequence.
/// Agent order matches the referenced Sequence's agent_ids.
class PredictionSet {
 public:
  PredictionSet(std::string sequence_id, std::vector<std::int64_t> agent_ids,
                SampleTensor samples);

  const std::string& sequence_id() const { return sequence_id_; }
  const std::vector<std::int64_t>& agent_ids() const { return agent_ids_; }
  const SampleTensor& samples() const { return samples_; }
  std::size_t num_samples() const { return samples_.num_samples(); }
  std::size_t num_agents() const { return samples_.num_agents(); }
  std::size_t num_steps() const { return samples_.num_steps(); }

 private:
  std::string sequence_id_;
  std::vector<std::int64_t> agent_ids_;
  SampleTensor samples_;
};

/// Throws ShapeError unless the prediction set matches the ground truth's
/// agent count, agent ordering and horizon.
void check_compatible(const PredictionSet& pred, const Sequence& gt);

/// Throws ShapeError unless `samples` has one track per ground-truth agent of
/// matching horizon.
void check_compatible(const SampleTensor& samples, const TrackGrid& gt);

}  // namespace trajeval

#endif  // TRAJEVAL_TYPES_HPP_
