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

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "skewcoal/lattice.hpp"

namespace skewcoal {

/// Skewness beta and the initial gap of the pair (0, y). Positions are held
/// in lattice sites (multiples of h); y is rounded half-up to the nearest
/// positive even number of sites so the two walks share a parity class.
class SkewParams {
public:
    SkewParams(double beta, double y, const LatticeConfig& config);

    /// Direct construction from an even, positive site count.
    static SkewParams from_sites(double beta, std::int64_t y_sites, const LatticeConfig& config);

    double beta() const noexcept { return beta_; }
    double requested_y() const noexcept { return requested_y_; }
    std::int64_t y_sites() const noexcept { return y_sites_; }
    double rounded_y() const noexcept { return static_cast<double>(y_sites_) * h_; }

private:
    SkewParams(double beta, double requested_y, std::int64_t y_sites, double h);

    double beta_;
    double requested_y_;
    std::int64_t y_sites_;
    double h_;
};

/// Rounds y/h half-up to an even site count (may be 0).
std::int64_t round_to_even_sites(double y, double h);

// ---------------------------------------------------------------------------
// Step kernel (lattice units)

/// Direction of one skew-walk step: away from 0 the walk follows the driver
/// (+1 iff u < 1/2); at 0 it steps +1 iff u < (1 + beta)/2.
inline int skew_direction(std::int64_t site, double u, double beta) noexcept {
    if (site != 0) return driver_sign(u);
    return u < 0.5 * (1.0 + beta) ? +1 : -1;
}

struct SiteStep {
    std::int64_t lower;
    std::int64_t upper;
    bool push_lower;
    bool push_upper;
    int driver;
};

/// Advances both walks with one shared uniform. A push is a step at site 0
/// whose direction differs from the driver's.
inline SiteStep coupled_site_step(std::int64_t lower, std::int64_t upper, double u, double beta) noexcept {
    const int drive = driver_sign(u);
    const int dl = skew_direction(lower, u, beta);
    const int du = skew_direction(upper, u, beta);
    return {lower + dl, upper + du, dl != drive, du != drive, drive};
}

struct CoupledStep {
    double new_pos0;
    double new_posy;
    int push0;
    int pushy;
};

/// Real-valued form of the kernel. Throws std::invalid_argument unless both
/// positions sit on the lattice and posy - pos0 is a nonnegative even number
/// of sites.
CoupledStep coupled_step(double pos0, double posy, double u, const SkewParams& params,
                         const LatticeConfig& config);

/// Online coupled pair: the state of (X^0, X^y) plus the driver and the
/// per-walk zero-visit and push counters.
class CoupledWalker {
public:
    CoupledWalker(std::int64_t lower_start, std::int64_t upper_start, double beta) noexcept
        : lower_(lower_start), upper_(upper_start), beta_(beta) {}

    void advance(double u) noexcept {
        zero_visits_lower_ += lower_ == 0;
        zero_visits_upper_ += upper_ == 0;
        const SiteStep s = coupled_site_step(lower_, upper_, u, beta_);
        lower_ = s.lower;
        upper_ = s.upper;
        pushes_lower_ += s.push_lower;
        pushes_upper_ += s.push_upper;
        driver_ += s.driver;
        ++step_;
    }

    std::int64_t lower() const noexcept { return lower_; }
    std::int64_t upper() const noexcept { return upper_; }
    std::int64_t gap() const noexcept { return upper_ - lower_; }
    std::int64_t driver() const noexcept { return driver_; }
    std::int64_t step() const noexcept { return step_; }
    std::int64_t zero_visits_lower() const noexcept { return zero_visits_lower_; }
    std::int64_t zero_visits_upper() const noexcept { return zero_visits_upper_; }
    std::int64_t pushes_lower() const noexcept { return pushes_lower_; }
    std::int64_t pushes_upper() const noexcept { return pushes_upper_; }
    bool coalesced() const noexcept { return lower_ == upper_; }

private:
    std::int64_t lower_;
    std::int64_t upper_;
    double beta_;
    std::int64_t driver_ = 0;
    std::int64_t step_ = 0;
    std::int64_t zero_visits_lower_ = 0;
    std::int64_t zero_visits_upper_ = 0;
    std::int64_t pushes_lower_ = 0;
    std::int64_t pushes_upper_ = 0;
};

// ---------------------------------------------------------------------------
// Recorded paths

/// Full record of a coupled run. Index n runs over steps 0..steps().
/// zero_visits_*[n] counts steps j < n taken from site 0; pushes_*[n] counts
/// pushes among those steps; driver_sites[n] is B_n / h.
struct CoupledPath {
    CoupledPath(const LatticeConfig& cfg, const SkewParams& prm, std::int64_t origin = 0)
        : config(cfg), params(prm), origin_site(origin) {}

    LatticeConfig config;
    SkewParams params;
    std::int64_t origin_site = 0;
    std::vector<std::int64_t> lower_sites;
    std::vector<std::int64_t> upper_sites;
    std::vector<std::int64_t> driver_sites;
    std::vector<std::int64_t> zero_visits_lower;
    std::vector<std::int64_t> zero_visits_upper;
    std::vector<std::int64_t> pushes_lower;
    std::vector<std::int64_t> pushes_upper;
    std::optional<std::int64_t> coalesce_step;

    std::int64_t steps() const noexcept { return static_cast<std::int64_t>(lower_sites.size()) - 1; }
    double h() const noexcept { return config.h(); }
    double x0(std::int64_t n) const noexcept { return static_cast<double>(lower_sites[n]) * h(); }
    double xy(std::int64_t n) const noexcept { return static_cast<double>(upper_sites[n]) * h(); }
    std::vector<double> x0_positions() const;
    std::vector<double> xy_positions() const;
};

CoupledPath simulate_coupled(const SkewParams& params, const LatticeConfig& config, UniformStream stream,
                             bool stop_at_coalescence);

/// Same, driven by an explicit uniform sequence; the run is capped at
/// min(max_steps, uniforms.size()) steps.
CoupledPath simulate_coupled(const SkewParams& params, const LatticeConfig& config,
                             std::span<const double> uniforms, bool stop_at_coalescence);

/// Pair started at arbitrary sites of equal parity (lower <= upper), driven by
/// explicit uniforms. Used for the reflection and monotone-flow properties.
CoupledPath simulate_pair(std::int64_t lower_start, std::int64_t upper_start, double beta,
                          const LatticeConfig& config, std::span<const double> uniforms);

/// First step with zero gap, without recording the path.
std::optional<std::int64_t> first_coalescence_step(const SkewParams& params, const LatticeConfig& config,
                                                    UniformStream stream);

/// Single skew walk from `start_site` for config.max_steps() steps.
std::vector<std::int64_t> simulate_skew_walk(double beta, std::int64_t start_site, const LatticeConfig& config,
                                             UniformStream stream);

/// Site of a single skew walk after config.max_steps() steps (no recording).
std::int64_t skew_walk_endpoint(double beta, std::int64_t start_site, const LatticeConfig& config,
                                UniformStream stream);

// ---------------------------------------------------------------------------
// Derived series

/// hat_l0 = X^0 - x - B and hat_ly = X^y - B, stored in sites so the gap
/// identity hat_ly - hat_l0 = D holds without rounding.
struct LocalTimeSeries {
    double h;
    std::vector<std::int64_t> hat_l0_sites;
    std::vector<std::int64_t> hat_ly_sites;

    double hat_l0(std::int64_t n) const noexcept { return static_cast<double>(hat_l0_sites[n]) * h; }
    double hat_ly(std::int64_t n) const noexcept { return static_cast<double>(hat_ly_sites[n]) * h; }
};

LocalTimeSeries local_time_series(const CoupledPath& path);

/// Secondary local-time estimate for X^0: h times the number of visits to 0.
std::vector<double> visit_local_time(const CoupledPath& path);

std::vector<std::int64_t> gap_sites(const CoupledPath& path);
std::vector<double> gap_series(const CoupledPath& path);

struct CoalescenceTime {
    std::int64_t step;
    double time;
};

std::optional<CoalescenceTime> coalescence_time(const CoupledPath& path);

} // namespace skewcoal
