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

#include "skewcoal/report.hpp"

#include <charconv>
#include <cmath>

namespace skewcoal {

std::string format_number(double x) {
    if (std::isnan(x)) return "NaN";
    if (std::isinf(x)) return x > 0 ? "Inf" : "-Inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

std::string format_number(const std::optional<double>& x) { return x ? format_number(*x) : "NA"; }

void write_ladder_csv(std::ostream& out, const LadderTable& table, const std::string& comment) {
    if (!comment.empty()) out << comment << '\n';
    out << kLadderCsvHeader << '\n';
    for (const LadderRow& row : table.rows) {
        out << row.replicate << ',' << row.k << ',' << format_number(row.w) << ',' << format_number(row.v) << ','
            << format_number(row.m) << ',' << format_number(row.t_time) << ',' << format_number(row.s_time) << '\n';
    }
}

void write_excursion_csv(std::ostream& out, const std::vector<ExcursionRecord>& excursions,
                         const std::string& comment) {
    if (!comment.empty()) out << comment << '\n';
    out << kExcursionCsvHeader << '\n';
    for (const ExcursionRecord& e : excursions) {
        out << e.start << ',' << e.end << ',' << (e.sign > 0 ? "+1" : "-1") << ',' << format_number(e.height) << ','
            << format_number(e.local_time_clock) << '\n';
    }
}

nlohmann::json to_json(const TestVerdict& v) {
    return {{"description", v.description},
            {"statistic", v.statistic},
            {"threshold", v.threshold},
            {"n", v.n},
            {"passed", v.passed}};
}

nlohmann::json to_json(const std::vector<TestVerdict>& verdicts) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : verdicts) arr.push_back(to_json(v));
    return arr;
}

} // namespace skewcoal
