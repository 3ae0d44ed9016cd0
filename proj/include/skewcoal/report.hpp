// Copyright 2026 The skewcoal Authors.
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

#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "skewcoal/excursion.hpp"
#include "skewcoal/ladder.hpp"
#include "skewcoal/stats.hpp"

namespace skewcoal {

/// Shortest round-trip decimal form; identical on every platform.
std::string format_number(double x);
/// "NA" when absent.
std::string format_number(const std::optional<double>& x);

inline constexpr const char* kLadderCsvHeader = "replicate,k,W,V,M,T_time,S_time";
inline constexpr const char* kExcursionCsvHeader = "start,end,sign,height,clock";

/// Each writer emits `comment` first (a '#'-prefixed line, if non-empty),
/// then the column header, then rows.
void write_ladder_csv(std::ostream& out, const LadderTable& table, const std::string& comment);
void write_excursion_csv(std::ostream& out, const std::vector<ExcursionRecord>& excursions,
                         const std::string& comment);

nlohmann::json to_json(const TestVerdict& verdict);
nlohmann::json to_json(const std::vector<TestVerdict>& verdicts);

} // namespace skewcoal
