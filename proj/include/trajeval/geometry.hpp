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

#ifndef TRAJEVAL_GEOMETRY_HPP_
#define TRAJEVAL_GEOMETRY_HPP_

#include <span>

#include "trajeval/types.hpp"

namespace trajeval {

/// Agent radius used by the collision test, in meters.
inline constexpr double kDefaultAgentRadius = 0.1;

/// Closed segment; a == b is a point (a stationary agent).
struct Segment {
  Position a;
  Position b;
};

/// Euclidean distance from `p` to the closed segment `s`.
double point_segment_distance(const Position& p, const Segment& s);

/// Exact minimum distance between two closed segments. Zero iff they touch.
double segment_distance(const Segment& s1, const Segment& s2);

/// Smallest distance between two time-aligned tracks: the minimum over t of
/// segment_distance((a_t, a_t+1), (b_t, b_t+1)), or the point distance when
/// the tracks have a single step. Throws ShapeError on length mismatch or
/// empty tracks.
double min_aligned_distance(std::span<const Position> track_a, std::span<const Position> track_b);

/// True iff the two tracks' same-timestep motion segments come strictly
/// closer than 2 * radius. Throws ConfigError if radius <= 0.
bool agents_collide(std::span<const Position> track_a, std::span<const Position> track_b,
                    double radius);

}  // namespace trajeval

#endif  // TRAJEVAL_GEOMETRY_HPP_
