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

#include "trajeval/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "trajeval/error.hpp"

namespace trajeval {
namespace {

// Sign of the orientation of (a, b, c): +1 left turn, -1 right turn, 0 collinear.
int orientation(const Position& a, const Position& b, const Position& c) {
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

// Assumes a, b, p collinear.
bool on_segment(const Position& a, const Position& b, const Position& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const Segment& s1, const Segment& s2) {
  const int o1 = orientation(s1.a, s1.b, s2.a);
  const int o2 = orientation(s1.a, s1.b, s2.b);
  const int o3 = orientation(s2.a, s2.b, s1.a);
  const int o4 = orientation(s2.a, s2.b, s1.b);
  if (o1 != o2 && o3 != o4) return true;
  // Collinear touching cases.
  if (o1 == 0 && on_segment(s1.a, s1.b, s2.a)) return true;
  if (o2 == 0 && on_segment(s1.a, s1.b, s2.b)) return true;
  if (o3 == 0 && on_segment(s2.a, s2.b, s1.a)) return true;
  if (o4 == 0 && on_segment(s2.a, s2.b, s1.b)) return true;
  return false;
}

}  // namespace

double point_segment_distance(const Position& p, const Segment& s) {
  const Vec2 d = s.b - s.a;
  const double len2 = squared_norm(d);
  if (len2 == 0.0) return norm(p - s.a);
  const double u = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
  return norm(p - (s.a + u * d));
}

double segment_distance(const Segment& s1, const Segment& s2) {
  if (segments_intersect(s1, s2)) return 0.0;
  // Disjoint closed segments attain their minimum at an endpoint of one of them.
  return std::min({point_segment_distance(s1.a, s2), point_segment_distance(s1.b, s2),
                   point_segment_distance(s2.a, s1), point_segment_distance(s2.b, s1)});
}

double min_aligned_distance(std::span<const Position> track_a, std::span<const Position> track_b) {
  if (track_a.size() != track_b.size()) {
    throw ShapeError("track lengths differ: " + std::to_string(track_a.size()) + " vs " +
                     std::to_string(track_b.size()));
  }
  if (track_a.empty()) throw ShapeError("empty track");
  if (track_a.size() == 1) return norm(track_a[0] - track_b[0]);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t + 1 < track_a.size(); ++t) {
    best = std::min(best, segment_distance({track_a[t], track_a[t + 1]},
                                           {track_b[t], track_b[t + 1]}));
  }
  return best;
}

bool agents_collide(std::span<const Position> track_a, std::span<const Position> track_b,
                    double radius) {
  if (!(radius > 0.0)) throw ConfigError("agent radius must be positive");
  const double threshold = 2.0 * radius;
  if (track_a.size() != track_b.size()) {
    throw ShapeError("track lengths differ: " + std::to_string(track_a.size()) + " vs " +
                     std::to_string(track_b.size()));
  }
  if (track_a.empty()) throw ShapeError("empty track");
  if (track_a.size() == 1) return norm(track_a[0] - track_b[0]) < threshold;
  for (std::size_t t = 0; t + 1 < track_a.size(); ++t) {
    if (segment_distance({track_a[t], track_a[t + 1]}, {track_b[t], track_b[t + 1]}) < threshold) {
      return true;
    }
  }
  return false;
}

}  // namespace trajeval
