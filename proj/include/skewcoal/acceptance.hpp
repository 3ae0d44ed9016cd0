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

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "skewcoal/ladder.hpp"
#include "skewcoal/stats.hpp"

namespace skewcoal {

// Pinned tolerances. Every statistical check runs with a fixed seed; delta
// sizes the chance that a re-seeded run would flag a correct simulator.
inline constexpr double kDkwDelta = 0.05;
inline constexpr double kLadderKsAllowance = 0.03;
inline constexpr double kMeanAllowance = 0.01;
inline constexpr double kLogVarianceRelTol = 0.15;
inline constexpr double kSigmas = 3.0;
inline constexpr double kIntensityAllowance = 0.10;

/// Law checks on a pooled first-cycle ladder sample (beta != 0):
/// KS of W_1 against w^{(1-b)/(2b)} (DKW + allowance), mean of W_1, mean and
/// variance of log V_1, and, when Var(WV) is finite (|beta| < 1/3), the mean
/// of W_1 V_1. `reference_n` sizes the DKW and standard-error terms; pass 0 to
/// use each sample's own size.
std::vector<TestVerdict> ladder_law_verdicts(const LadderTable& table, double beta, std::size_t reference_n = 0);

struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<TestVerdict> checks;
    double seconds = 0.0;

    bool passed() const;
};

struct AcceptanceOptions {
    unsigned threads = 1;
    /// Called after each criterion finishes.
    std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run_acceptance_suite(const AcceptanceOptions& options);

/// One line per criterion: "[PASS] 5 chain decay ..." followed by its checks.
void print_criterion(std::ostream& out, const CriterionResult& result);

} // namespace skewcoal
