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

#include "skewcoal/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "skewcoal/parallel.hpp"

namespace skewcoal {

LadderTracker::LadderTracker(double h, std::int64_t lower_start, std::int64_t upper_start, std::size_t k_max)
    : h_(h), k_max_(k_max) {
    if (lower_start != 0) throw std::invalid_argument("ladder: X^0 must start at site 0 (T_0 = 0)");
    const std::int64_t gap = upper_start - lower_start;
    if (gap < 0) throw std::invalid_argument("ladder: upper walk must start above the lower walk");
    rec_.t_steps.push_back(0);
    rec_.gap_at_t.push_back(gap);
    rec_.m_values.push_back(static_cast<double>(gap) * h_);
    if (gap == 0) {
        rec_.coalesced = true;
        rec_.coalesce_step = 0;
        rec_.coalesced_in_cycle = 1;
        done_ = true;
    } else if (k_max_ == 0) {
        done_ = true;
    }
}

bool LadderTracker::observe(std::int64_t step, std::int64_t lower, std::int64_t upper) {
    if (done_) return false;
    rec_.last_step = step;
    const std::int64_t gap = upper - lower;
    if (gap == 0) {
        rec_.coalesced = true;
        rec_.coalesce_step = step;
        rec_.coalesced_in_cycle = rec_.complete_cycles + 1;
        rec_.trailing_w.reset();
        done_ = true;
        return false;
    }
    if (phase_ == Phase::Shrink) {
        if (upper == 0) {
            rec_.s_steps.push_back(step);
            rec_.gap_at_s.push_back(gap);
            rec_.trailing_w = static_cast<double>(gap) / static_cast<double>(rec_.gap_at_t.back());
            phase_ = Phase::Grow;
        }
    } else if (lower == 0) {
        rec_.t_steps.push_back(step);
        rec_.gap_at_t.push_back(gap);
        rec_.w_values.push_back(*rec_.trailing_w);
        rec_.v_values.push_back(static_cast<double>(gap) / static_cast<double>(rec_.gap_at_s.back()));
        rec_.m_values.push_back(static_cast<double>(gap) * h_);
        rec_.trailing_w.reset();
        ++rec_.complete_cycles;
        phase_ = Phase::Shrink;
        if (static_cast<std::size_t>(rec_.complete_cycles) >= k_max_) done_ = true;
    }
    return !done_;
}

LadderRecord extract_ladder(const CoupledPath& path, std::size_t k_max) {
    if (path.params.beta() < 0.0) {
        throw std::invalid_argument("extract_ladder: beta < 0; extract the mirror-image pair instead");
    }
    if (path.lower_sites.empty()) throw std::invalid_argument("extract_ladder: empty path");
    LadderTracker tracker(path.h(), path.lower_sites[0], path.upper_sites[0], k_max);
    const std::int64_t steps = path.steps();
    for (std::int64_t n = 1; n <= steps; ++n) {
        if (!tracker.observe(n, path.lower_sites[n], path.upper_sites[n])) break;
    }
    return std::move(tracker).take();
}

bool check_segment_monotonicity(const CoupledPath& path, const LadderRecord& ladder) {
    const std::vector<std::int64_t> gap = gap_sites(path);
    const auto last = std::min<std::int64_t>(ladder.last_step, static_cast<std::int64_t>(gap.size()) - 1);

    // Alternating boundaries T_0, S_0, T_1, S_1, ...; even index = shrink start.
    std::vector<std::int64_t> bounds;
    for (std::size_t k = 0; k < ladder.t_steps.size(); ++k) {
        bounds.push_back(ladder.t_steps[k]);
        if (k < ladder.s_steps.size()) bounds.push_back(ladder.s_steps[k]);
    }
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        const std::int64_t a = bounds[i];
        const std::int64_t b = i + 1 < bounds.size() ? bounds[i + 1] : last;
        if (b < a) return false;
        const bool shrink = i % 2 == 0;
        for (std::int64_t n = a; n < b; ++n) {
            if (shrink ? gap[n + 1] > gap[n] : gap[n + 1] < gap[n]) return false;
        }
    }

    for (std::size_t k = 0; k + 1 < ladder.t_steps.size(); ++k) {
        const std::int64_t bound = std::max(ladder.gap_at_t[k], ladder.gap_at_t[k + 1]);
        const auto first = gap.begin() + ladder.t_steps[k];
        const auto end = gap.begin() + ladder.t_steps[k + 1] + 1;
        if (*std::max_element(first, end) > bound) return false;
    }
    return true;
}

namespace {

LadderRecord run_replicate(const SkewParams& params, const LatticeConfig& config, std::uint64_t seed,
                           std::uint64_t replicate, std::size_t k_max) {
    UniformStream stream = derive_stream(seed, replicate);
    const bool mirrored = params.beta() < 0.0;
    CoupledWalker walker(0, params.y_sites(), std::abs(params.beta()));
    LadderTracker tracker(config.h(), 0, params.y_sites(), k_max);
    const std::int64_t steps = config.max_steps();
    for (std::int64_t n = 1; n <= steps && !tracker.done(); ++n) {
        const double u = stream.next_uniform();
        walker.advance(mirrored ? 1.0 - u : u);
        tracker.observe(n, walker.lower(), walker.upper());
    }
    return std::move(tracker).take();
}

} // namespace

LadderTable collect_ladder_samples(const SkewParams& params, const LatticeConfig& config,
                                   std::uint64_t master_seed, std::size_t n_replicates, std::size_t k_max,
                                   unsigned threads) {
    const auto records = map_replicates(n_replicates, threads, [&](std::size_t r) {
        return run_replicate(params, config, master_seed, r, k_max);
    });

    LadderTable table;
    table.n_replicates = n_replicates;
    for (std::size_t r = 0; r < records.size(); ++r) {
        const LadderRecord& rec = records[r];
        for (std::int64_t k = 1; k <= rec.complete_cycles; ++k) {
            const auto i = static_cast<std::size_t>(k);
            table.rows.push_back({r, k, rec.w_values[i - 1], rec.v_values[i - 1], rec.m_values[i],
                                  config.time_of(rec.t_steps[i]), config.time_of(rec.s_steps[i - 1])});
        }
        if (rec.coalesced_in_cycle) {
            table.rows.push_back(
                {r, *rec.coalesced_in_cycle, 0.0, std::nullopt, 0.0, config.time_of(*rec.coalesce_step), std::nullopt});
        } else if (rec.trailing_w) {
            table.rows.push_back({r, rec.complete_cycles + 1, *rec.trailing_w, std::nullopt, std::nullopt,
                                  std::nullopt, config.time_of(rec.s_steps.back())});
        }

        if (rec.complete_cycles >= 1) {
            ++table.complete_cycle1;
        } else if (rec.coalesced_in_cycle == 1) {
            ++table.coalesced_in_cycle1;
        } else {
            ++table.unresolved_cycle1;
            if (!rec.trailing_w) ++table.censored_before_s0;
        }
    }
    return table;
}

std::vector<double> pooled_w(const LadderTable& table, std::int64_t k) {
    std::vector<double> out;
    for (const auto& row : table.rows) {
        if (row.k == k && row.w) out.push_back(*row.w);
    }
    return out;
}

std::vector<double> pooled_v(const LadderTable& table, std::int64_t k) {
    std::vector<double> out;
    for (const auto& row : table.rows) {
        if (row.k == k && row.v) out.push_back(*row.v);
    }
    return out;
}

std::vector<double> pooled_product(const LadderTable& table, std::int64_t k) {
    std::vector<double> out;
    for (const auto& row : table.rows) {
        if (row.k != k) continue;
        if (row.w && row.v) {
            out.push_back(*row.w * *row.v);
        } else if (row.m && *row.m == 0.0) {
            out.push_back(0.0);
        }
    }
    return out;
}

std::vector<std::pair<double, double>> pooled_m_and_product(const LadderTable& table, std::int64_t k) {
    std::vector<std::pair<double, double>> out;
    if (k < 2) return out;
    // Rows are sorted by (replicate, k): the row for k-1 directly precedes k.
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        const LadderRow& prev = table.rows[i - 1];
        const LadderRow& row = table.rows[i];
        if (row.k != k || prev.replicate != row.replicate || prev.k != k - 1) continue;
        if (!prev.m || !row.w) continue;
        if (row.v) {
            out.emplace_back(*prev.m, *row.w * *row.v);
        } else if (*row.w == 0.0 && row.m) {
            out.emplace_back(*prev.m, 0.0);
        }
    }
    return out;
}

} // namespace skewcoal
