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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "skewcoal/coupled.hpp"
#include "skewcoal/lattice.hpp"

namespace skewcoal {

/*
 * Ladder decomposition of a coupled path with beta >= 0.
 *
 *   T_0 = 0,  S_k = first step > T_k with X^y at 0,
 *             T_k = first step > S_{k-1} with X^0 at 0,
 *   W_k = D(S_{k-1}) / D(T_{k-1}),  V_k = D(T_k) / D(S_{k-1}),  M_k = D(T_k).
 *
 * The gap D only shrinks on [T_k, S_k] and only grows on [S_k, T_{k+1}], so
 * W_k <= 1 <= V_k. Coalescence can only end a shrink phase; when it does,
 * the record keeps coalesced_in_cycle = k and the cycle is not counted as
 * complete (its W would be 0 and its V undefined).
 */
struct LadderRecord {
    std::vector<std::int64_t> t_steps;   // T_0..T_K
    std::vector<std::int64_t> s_steps;   // S_0..S_{K-1}, plus S_K when reached
    std::vector<std::int64_t> gap_at_t;  // D(T_k) in sites
    std::vector<std::int64_t> gap_at_s;  // D(S_k) in sites
    std::vector<double> m_values;        // M_0..M_K, spatial units
    std::vector<double> w_values;        // W_1..W_K
    std::vector<double> v_values;        // V_1..V_K
    std::int64_t complete_cycles = 0;
    bool coalesced = false;
    std::optional<std::int64_t> coalesce_step;
    /// Cycle index k whose shrink phase ended in coalescence.
    std::optional<std::int64_t> coalesced_in_cycle;
    /// W of a trailing cycle whose S was reached before the horizon but whose
    /// T was not. Not part of w_values.
    std::optional<double> trailing_w;
    /// Last step fed to the extractor.
    std::int64_t last_step = 0;
};

/// Online ladder extraction. Feed (step, lower, upper) in order, starting at
/// step 0; observe() returns false once nothing more can be extracted
/// (coalescence or k_max complete cycles).
class LadderTracker {
public:
    LadderTracker(double h, std::int64_t lower_start, std::int64_t upper_start, std::size_t k_max);

    bool observe(std::int64_t step, std::int64_t lower, std::int64_t upper);
    bool done() const noexcept { return done_; }
    const LadderRecord& record() const noexcept { return rec_; }
    LadderRecord take() && { return std::move(rec_); }

private:
    enum class Phase { Shrink, Grow };

    double h_;
    std::size_t k_max_;
    Phase phase_ = Phase::Shrink;
    bool done_ = false;
    LadderRecord rec_;
};

/// Throws std::invalid_argument for beta < 0 (extract the mirrored pair
/// instead) or a path that does not start with X^0 at site 0.
LadderRecord extract_ladder(const CoupledPath& path, std::size_t k_max = static_cast<std::size_t>(-1));

/// True iff D is nonincreasing on every [T_k, S_k], nondecreasing on every
/// [S_k, T_{k+1}] (including the trailing open segment), and
/// sup_{[T_k, T_{k+1}]} D <= max(M_k, M_{k+1}) for every complete cycle.
bool check_segment_monotonicity(const CoupledPath& path, const LadderRecord& ladder);

// ---------------------------------------------------------------------------
// Pooled samples

/// One table row per cycle k of one replicate. Optional fields print as NA.
/// Complete cycles fill every field; a cycle ended by coalescence has W = 0,
/// M = 0 and T_time = the coalescence time; a trailing cycle cut by the
/// horizon has W and S_time only.
struct LadderRow {
    std::uint64_t replicate = 0;
    std::int64_t k = 0;
    std::optional<double> w;
    std::optional<double> v;
    std::optional<double> m;
    std::optional<double> t_time;
    std::optional<double> s_time;
};

struct LadderTable {
    std::vector<LadderRow> rows;  // sorted by (replicate, k)
    std::size_t n_replicates = 0;
    std::size_t coalesced_in_cycle1 = 0;
    std::size_t complete_cycle1 = 0;
    /// Replicates whose horizon ended before cycle 1 resolved (neither
    /// completed nor coalesced).
    std::size_t unresolved_cycle1 = 0;
    /// Subset of those that did not even reach S_0 (W_1 unknown).
    std::size_t censored_before_s0 = 0;
};

/// Runs n_replicates coupled simulations with streams derive_stream(seed, r)
/// and pools their ladder variables by cycle index. The ladder laws depend on
/// |beta| only; for beta < 0 each replicate runs |beta| with the reflected
/// driver u -> 1 - u.
LadderTable collect_ladder_samples(const SkewParams& params, const LatticeConfig& config,
                                   std::uint64_t master_seed, std::size_t n_replicates, std::size_t k_max,
                                   unsigned threads = 1);

/// W_k over replicates where it is determined (cycles ended by coalescence
/// contribute 0).
std::vector<double> pooled_w(const LadderTable& table, std::int64_t k);
/// V_k over complete cycles.
std::vector<double> pooled_v(const LadderTable& table, std::int64_t k);
/// M_k / M_{k-1} = W_k V_k over complete cycles and coalescence-ended cycles (0).
std::vector<double> pooled_product(const LadderTable& table, std::int64_t k);
/// (M_{k-1}, W_k V_k) pairs over complete and coalescence-ended cycles k.
std::vector<std::pair<double, double>> pooled_m_and_product(const LadderTable& table, std::int64_t k);

} // namespace skewcoal
