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

#include "trajeval/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>
#include <tuple>
#include <unordered_map>

#include "trajeval/error.hpp"

namespace trajeval {
namespace {

namespace fs = std::filesystem;

constexpr std::string_view kPredMagic = "#trajeval-pred";

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string_view> split_tabs(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find('\t', start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<std::int64_t> to_int(std::string_view s) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// Integer that may be written in float notation ("840.0", "1e3").
std::optional<std::int64_t> to_integral(std::string_view s) {
  if (auto i = to_int(s)) return i;
  const auto d = to_double(s);
  if (!d || std::floor(*d) != *d || std::fabs(*d) > 9.0e15) return std::nullopt;
  return static_cast<std::int64_t>(*d);
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return in;
}

struct CellKey {
  std::size_t sample;
  std::int64_t agent;
  std::size_t step;
  bool operator<(const CellKey& o) const {
    return std::tie(sample, agent, step) < std::tie(o.sample, o.agent, o.step);
  }
};

struct Header {
  std::size_t num_samples = 0;
  std::size_t num_steps = 0;
};

Header parse_header(std::string_view line, const std::string& source, std::size_t lineno) {
  const auto fields = split_whitespace(line);
  if (fields.size() != 4 || fields[0] != kPredMagic || fields[1] != "v1" ||
      !fields[2].starts_with("K=") || !fields[3].starts_with("T=")) {
    throw ParseError(source, lineno, "expected header '#trajeval-pred v1 K=<K> T=<T>'");
  }
  const auto k = to_int(fields[2].substr(2));
  const auto t = to_int(fields[3].substr(2));
  if (!k || !t || *k < 1 || *t < 1) {
    throw ParseError(source, lineno, "header K and T must be positive integers");
  }
  return {static_cast<std::size_t>(*k), static_cast<std::size_t>(*t)};
}

}  // namespace

std::vector<RawRecord> parse_ethucy(std::istream& in, const std::string& source) {
  std::vector<RawRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto f = split_whitespace(body);
    if (f.size() != 4) {
      throw ParseError(source, lineno, "expected 4 fields 'frame agent_id x y', got " +
                                           std::to_string(f.size()));
    }
    const auto frame = to_integral(f[0]);
    const auto agent = to_integral(f[1]);
    const auto x = to_double(f[2]);
    const auto y = to_double(f[3]);
    if (!frame || *frame < 0) throw ParseError(source, lineno, "bad frame '" + std::string(f[0]) + "'");
    if (!agent) throw ParseError(source, lineno, "bad agent id '" + std::string(f[1]) + "'");
    if (!x || !y) throw ParseError(source, lineno, "bad coordinate");
    out.push_back({*frame, *agent, {*x, *y}});
  }
  return out;
}

std::vector<RawRecord> parse_ethucy(const fs::path& path) {
  auto in = open_input(path);
  return parse_ethucy(in, path.string());
}

std::vector<RawRecord> downsample(std::span<const RawRecord> records, double native_fps,
                                  double target_fps, int phase) {
  if (!(native_fps > 0.0) || !(target_fps > 0.0)) throw ConfigError("fps must be positive");
  const double ratio = native_fps / target_fps;
  const double k = std::round(ratio);
  if (k < 1.0 || std::fabs(ratio - k) > 1e-9 * ratio) {
    throw ConfigError("native fps " + format_double(native_fps) +
                      " is not an integer multiple of target fps " + format_double(target_fps));
  }
  const auto step = static_cast<std::int64_t>(k);
  if (phase < 0 || phase >= step) throw ConfigError("downsample phase out of range");
  std::vector<RawRecord> out;
  for (const auto& r : records) {
    if (r.frame % step == phase) out.push_back(r);
  }
  return out;
}

const char* to_string(DatasetName name) {
  switch (name) {
    case DatasetName::kEth: return "eth";
    case DatasetName::kHotel: return "hotel";
    case DatasetName::kUniv: return "univ";
    case DatasetName::kZara1: return "zara1";
    case DatasetName::kZara2: return "zara2";
    case DatasetName::kSddTrajnet: return "sdd_trajnet";
  }
  return "unknown";
}

std::optional<DatasetName> dataset_from_string(const std::string& name) {
  for (auto d : {DatasetName::kEth, DatasetName::kHotel, DatasetName::kUniv, DatasetName::kZara1,
                 DatasetName::kZara2, DatasetName::kSddTrajnet}) {
    if (name == to_string(d)) return d;
  }
  return std::nullopt;
}

DatasetSpec default_spec(DatasetName name) {
  DatasetSpec spec;
  // The community text releases are already at 2.5 fps.
  spec.native_fps = 2.5;
  spec.units = name == DatasetName::kSddTrajnet ? Units::kPixels : Units::kMeters;
  return spec;
}

void DatasetSpec::validate() const {
  if (!(native_fps > 0.0)) throw ConfigError("native_fps must be positive");
  if (leave_out_scene) {
    const bool found = std::any_of(scenes.begin(), scenes.end(), [&](const SceneFiles& s) {
      return s.scene == *leave_out_scene;
    });
    if (!found) throw ConfigError("leave-out scene '" + *leave_out_scene + "' not in dataset");
  }
}

SceneSplit leave_one_out(const DatasetSpec& spec) {
  spec.validate();
  if (!spec.leave_out_scene) throw ConfigError("leave_one_out: no held-out scene set");
  SceneSplit split;
  for (const auto& s : spec.scenes) {
    (s.scene == *spec.leave_out_scene ? split.test : split.train).push_back(s);
  }
  return split;
}

std::vector<SceneFiles> discover_scenes(const fs::path& root) {
  if (!fs::is_directory(root)) throw ConfigError("not a directory: " + root.string());
  std::vector<SceneFiles> scenes;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) {
      SceneFiles s{entry.path().filename().string(), {}};
      for (const auto& f : fs::recursive_directory_iterator(entry.path())) {
        if (f.is_regular_file() && f.path().extension() == ".txt") s.files.push_back(f.path());
      }
      std::sort(s.files.begin(), s.files.end());
      if (!s.files.empty()) scenes.push_back(std::move(s));
    } else if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      scenes.push_back({entry.path().stem().string(), {entry.path()}});
    }
  }
  std::sort(scenes.begin(), scenes.end(),
            [](const SceneFiles& a, const SceneFiles& b) { return a.scene < b.scene; });
  return scenes;
}

PredictionMap parse_predictions(std::istream& in, const PredictionParseOptions& opts,
                                const std::string& source) {
  std::optional<Header> header;
  std::map<std::string, std::map<CellKey, Vec2>> cells;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = line;
    if (!body.empty() && body.back() == '\r') body.remove_suffix(1);
    if (trim(body).empty()) continue;
    if (body.front() == '#') {
      if (body.starts_with(kPredMagic)) {
        if (header) throw ParseError(source, lineno, "duplicate header");
        header = parse_header(body, source, lineno);
      }
      continue;
    }
    if (!header) throw ParseError(source, lineno, "data line before '#trajeval-pred' header");
    const auto f = split_tabs(body);
    if (f.size() != 6) {
      throw ParseError(source, lineno,
                       "expected 6 tab-separated fields, got " + std::to_string(f.size()));
    }
    if (f[0].empty()) throw ParseError(source, lineno, "empty sequence id");
    const auto k = to_int(f[1]);
    const auto agent = to_int(f[2]);
    const auto t = to_int(f[3]);
    const auto x = to_double(f[4]);
    const auto y = to_double(f[5]);
    if (!k || *k < 0 || static_cast<std::size_t>(*k) >= header->num_samples) {
      throw ParseError(source, lineno, "sample index out of range [0, K)");
    }
    if (!agent) throw ParseError(source, lineno, "bad agent id");
    if (!t || *t < 1 || static_cast<std::size_t>(*t) > header->num_steps) {
      throw ParseError(source, lineno, "timestep out of range [1, T]");
    }
    if (!x || !y) throw ParseError(source, lineno, "bad coordinate");
    const CellKey key{static_cast<std::size_t>(*k), *agent, static_cast<std::size_t>(*t - 1)};
    auto [it, inserted] = cells[std::string(f[0])].emplace(key, Vec2{*x, *y});
    if (!inserted) {
      throw ParseError(source, lineno,
                       "duplicate cell (sequence " + std::string(f[0]) + ", sample " +
                           std::to_string(*k) + ", agent " + std::to_string(*agent) + ", t " +
                           std::to_string(*t) + ")");
    }
  }
  if (!header) throw ParseError(source, 0, "missing '#trajeval-pred' header");

  std::unordered_map<std::string, const Sequence*> index;
  if (opts.use_index) {
    for (const auto& s : opts.index) index.emplace(s.sequence_id(), &s);
  }

  PredictionMap out;
  for (auto& [seq_id, grid] : cells) {
    std::vector<std::int64_t> agents;
    std::size_t num_samples = 0;
    {
      std::set<std::int64_t> seen;
      for (const auto& [key, v] : grid) {
        seen.insert(key.agent);
        num_samples = std::max(num_samples, key.sample + 1);
      }
      agents.assign(seen.begin(), seen.end());
    }
    if (opts.use_index) {
      const auto it = index.find(seq_id);
      if (it == index.end()) throw ParseError(source, 0, "unknown sequence id '" + seq_id + "'");
      const auto& expected = it->second->agent_ids();
      for (auto a : agents) {
        if (std::find(expected.begin(), expected.end(), a) == expected.end()) {
          throw ParseError(source, 0, "sequence " + seq_id + ": unknown agent " + std::to_string(a));
        }
      }
      agents = expected;
    }
    if (!opts.allow_ragged_k) num_samples = header->num_samples;

    const std::size_t num_steps = header->num_steps;
    SampleTensor samples(num_samples, agents.size(), num_steps);
    for (std::size_t k = 0; k < num_samples; ++k) {
      for (std::size_t n = 0; n < agents.size(); ++n) {
        for (std::size_t t = 0; t < num_steps; ++t) {
          const auto it = grid.find({k, agents[n], t});
          if (it == grid.end()) {
            throw ParseError(source, 0,
                             "missing cell (sequence " + seq_id + ", sample " + std::to_string(k) +
                                 ", agent " + std::to_string(agents[n]) + ", t " +
                                 std::to_string(t + 1) + ")");
          }
          samples.at(k, n, t) = it->second;
        }
      }
    }
    out.emplace(seq_id, PredictionSet(seq_id, std::move(agents), std::move(samples)));
  }
  return out;
}

PredictionMap parse_predictions(const fs::path& path, const PredictionParseOptions& opts) {
  auto in = open_input(path);
  return parse_predictions(in, opts, path.string());
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf.data(), ptr);
}

void write_predictions(const PredictionMap& preds, std::ostream& out) {
  std::size_t num_samples = 1;
  std::optional<std::size_t> num_steps;
  for (const auto& [id, p] : preds) {
    num_samples = std::max(num_samples, p.num_samples());
    if (num_steps && *num_steps != p.num_steps()) {
      throw ConfigError("write_predictions: prediction sets have different horizons");
    }
    num_steps = p.num_steps();
  }
  out << kPredMagic << " v1 K=" << num_samples << " T=" << num_steps.value_or(1) << '\n';
  for (const auto& [id, p] : preds) {
    const auto& s = p.samples();
    for (std::size_t k = 0; k < s.num_samples(); ++k) {
      for (std::size_t n = 0; n < s.num_agents(); ++n) {
        for (std::size_t t = 0; t < s.num_steps(); ++t) {
          const auto& v = s.at(k, n, t);
          out << id << '\t' << k << '\t' << p.agent_ids()[n] << '\t' << (t + 1) << '\t'
              << format_double(v.x) << '\t' << format_double(v.y) << '\n';
        }
      }
    }
  }
}

void write_predictions(const PredictionMap& preds, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_predictions(preds, out);
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace trajeval
