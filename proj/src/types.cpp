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

#include "trajeval/types.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "trajeval/error.hpp"

namespace trajeval {
namespace {

bool all_finite(std::span<const Vec2> values) {
  return std::all_of(values.begin(), values.end(), [](const Vec2& v) { return is_finite(v); });
}

}  // namespace

TrackGrid::TrackGrid(std::size_t num_agents, std::size_t num_steps)
    : num_agents_(num_agents), num_steps_(num_steps), data_(num_agents * num_steps) {}

TrackGrid::TrackGrid(std::size_t num_agents, std::size_t num_steps, std::vector<Position> data)
    : num_agents_(num_agents), num_steps_(num_steps), data_(std::move(data)) {
  if (data_.size() != num_agents_ * num_steps_) {
    throw ShapeError("TrackGrid: expected " + std::to_string(num_agents_ * num_steps_) +
                     " positions, got " + std::to_string(data_.size()));
  }
}

SampleTensor::SampleTensor(std::size_t num_samples, std::size_t num_agents,
                           std::size_t num_steps)
    : num_samples_(num_samples),
      num_agents_(num_agents),
      num_steps_(num_steps),
      data_(num_samples * num_agents * num_steps) {}

SampleTensor::SampleTensor(std::size_t num_samples, std::size_t num_agents,
                           std::size_t num_steps, std::vector<Vec2> data)
    : num_samples_(num_samples),
      num_agents_(num_agents),
      num_steps_(num_steps),
      data_(std::move(data)) {
  if (data_.size() != num_samples_ * num_agents_ * num_steps_) {
    throw ShapeError("SampleTensor: expected " +
                     std::to_string(num_samples_ * num_agents_ * num_steps_) +
                     " entries, got " + std::to_string(data_.size()));
  }
}

Sequence::Sequence(std::string sequence_id, std::string scene_id, double frame_rate,
                   std::vector<std::int64_t> agent_ids, TrackGrid obs, TrackGrid future,
                   Units units)
    : sequence_id_(std::move(sequence_id)),
      scene_id_(std::move(scene_id)),
      frame_rate_(frame_rate),
      agent_ids_(std::move(agent_ids)),
      obs_(std::move(obs)),
      future_(std::move(future)),
      units_(units) {
  if (agent_ids_.empty()) throw ShapeError("sequence " + sequence_id_ + ": no agents");
  if (obs_.num_agents() != agent_ids_.size() || future_.num_agents() != agent_ids_.size()) {
    throw ShapeError("sequence " + sequence_id_ + ": track count does not match agent ids");
  }
  if (obs_.num_steps() < 1 || future_.num_steps() < 1) {
    throw ShapeError("sequence " + sequence_id_ + ": empty observation or future window");
  }
  if (std::set<std::int64_t>(agent_ids_.begin(), agent_ids_.end()).size() != agent_ids_.size()) {
    throw ShapeError("sequence " + sequence_id_ + ": duplicate agent id");
  }
  if (!all_finite(obs_.data()) || !all_finite(future_.data())) {
    throw ShapeError("sequence " + sequence_id_ + ": non-finite position");
  }
}

std::vector<Position> Sequence::full_track(std::size_t agent) const {
  std::vector<Position> out;
  out.reserve(obs_len() + pred_len());
  auto o = obs_.track(agent);
  auto f = future_.track(agent);
  out.insert(out.end(), o.begin(), o.end());
  out.insert(out.end(), f.begin(), f.end());
  return out;
}

PredictionSet::PredictionSet(std::string sequence_id, std::vector<std::int64_t> agent_ids,
                             SampleTensor samples)
    : sequence_id_(std::move(sequence_id)),
      agent_ids_(std::move(agent_ids)),
      samples_(std::move(samples)) {
  if (samples_.num_samples() < 1) {
    throw ShapeError("prediction set " + sequence_id_ + ": needs at least one sample");
  }
  if (samples_.num_agents() != agent_ids_.size()) {
    throw ShapeError("prediction set " + sequence_id_ + ": agent count mismatch");
  }
  if (!all_finite(samples_.data())) {
    throw ShapeError("prediction set " + sequence_id_ + ": non-finite position");
  }
}

void check_compatible(const SampleTensor& samples, const TrackGrid& gt) {
  if (samples.num_agents() != gt.num_agents() || samples.num_steps() != gt.num_steps()) {
    throw ShapeError("prediction shape (K=" + std::to_string(samples.num_samples()) +
                     ", N=" + std::to_string(samples.num_agents()) +
                     ", T=" + std::to_string(samples.num_steps()) +
                     ") does not match ground truth (N=" + std::to_string(gt.num_agents()) +
                     ", T=" + std::to_string(gt.num_steps()) + ")");
  }
  if (samples.num_samples() < 1) throw ShapeError("prediction has no samples");
}

void check_compatible(const PredictionSet& pred, const Sequence& gt) {
  try {
    check_compatible(pred.samples(), gt.future());
  } catch (const ShapeError& e) {
    throw ShapeError("sequence " + gt.sequence_id() + ": " + e.what());
  }
  if (pred.agent_ids() != gt.agent_ids()) {
    throw ShapeError("sequence " + gt.sequence_id() + ": agent ordering differs from ground truth");
  }
}

}  // namespace trajeval
