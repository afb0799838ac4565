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

// Serialization of evaluation reports. Schemas are documented in README.md.

#ifndef TRAJEVAL_REPORT_HPP_
#define TRAJEVAL_REPORT_HPP_

#include <iosfwd>

#include "json.hpp"
#include "trajeval/metrics.hpp"

namespace trajeval {

const char* weighting_name(Weighting w);

/// Non-finite values serialize as null.
nlohmann::ordered_json report_to_json(const AggregateReport& report, bool include_sequences = true);

/// `scope,scene,metric,value` rows: one per scene x metric, then the
/// cross-scene average ("overall") and the pooled mean ("pooled").
void write_report_csv(const AggregateReport& report, std::ostream& out);

/// Human-readable table, one row per scene plus the average.
void write_report_table(const AggregateReport& report, std::ostream& out);

}  // namespace trajeval

#endif  // TRAJEVAL_REPORT_HPP_
