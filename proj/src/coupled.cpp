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

#include "skewcoal/coupled.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace skewcoal {

namespace {

void check_beta(double beta) {
    if (!(std::abs(beta) <= 1.0)) {
        throw std::invalid_argument("beta must lie in [-1, 1], got " + std::to_string(beta));
    }
}

std::int64_t to_site(double position, double h, const char* what) {
    const double ratio = position / h;
    const double nearest = std::round(ratio);
    if (!std::isfinite(ratio) || std::abs(ratio - nearest) > 1e-6) {
        throw std::invalid_argument(std::string("coupled_step: ") + what + " is not a multiple of h");
    }
    return static_cast<std::int64_t>(nearest);
}

class Recorder {
public:
    Recorder(CoupledPath& path, std::int64_t reserve) : path_(path) {
        for (auto* v : {&path.lower_sites, &path.upper_sites, &path.driver_sites, &path.zero_visits_lower,
                        &path.zero_visits_upper, &path.pushes_lower, &path.pushes_upper}) {
            v->clear();
            v->reserve(static_cast<std::size_t>(reserve) + 1);
        }
    }

    void record(const CoupledWalker& w) {
        path_.lower_sites.push_back(w.lower());
        path_.upper_sites.push_back(w.upper());
        path_.driver_sites.push_back(w.driver());
        path_.zero_visits_lower.push_back(w.zero_visits_lower());
        path_.zero_visits_upper.push_back(w.zero_visits_upper());
        path_.pushes_lower.push_back(w.pushes_lower());
        path_.pushes_upper.push_back(w.pushes_upper());
    }

private:
    CoupledPath& path_;
};

template <class NextUniform>
void run_recorded(CoupledPath& path, std::int64_t lower_start, std::int64_t upper_start, std::int64_t steps,
                  bool stop_at_coalescence, NextUniform&& next) {
    CoupledWalker walker(lower_start, upper_start, path.params.beta());
    Recorder rec(path, steps);
    rec.record(walker);
    if (walker.coalesced()) path.coalesce_step = 0;
    for (std::int64_t n = 0; n < steps; ++n) {
        if (path.coalesce_step && stop_at_coalescence) break;
        walker.advance(next());
        rec.record(walker);
        if (!path.coalesce_step && walker.coalesced()) path.coalesce_step = walker.step();
    }
}

} // namespace

std::int64_t round_to_even_sites(double y, double h) {
    const double pairs = std::floor(y / (2.0 * h) + 0.5 + 1e-9);
    return 2 * static_cast<std::int64_t>(pairs);
}

SkewParams::SkewParams(double beta, double requested_y, std::int64_t y_sites, double h)
    : beta_(beta), requested_y_(requested_y), y_sites_(y_sites), h_(h) {}

SkewParams::SkewParams(double beta, double y, const LatticeConfig& config)
    : SkewParams(beta, y, 0, config.h()) {
    check_beta(beta);
    if (!(y > 0.0) || !std::isfinite(y)) {
        throw std::invalid_argument("SkewParams: y must be positive, got " + std::to_string(y));
    }
    y_sites_ = round_to_even_sites(y, config.h());
    if (y_sites_ <= 0) {
        throw std::invalid_argument("SkewParams: y = " + std::to_string(y) + " rounds to a zero gap at h = " +
                                    std::to_string(config.h()));
    }
}

SkewParams SkewParams::from_sites(double beta, std::int64_t y_sites, const LatticeConfig& config) {
    check_beta(beta);
    if (y_sites <= 0 || y_sites % 2 != 0) {
        throw std::invalid_argument("SkewParams: y_sites must be a positive even integer");
    }
    return SkewParams(beta, static_cast<double>(y_sites) * config.h(), y_sites, config.h());
}

CoupledStep coupled_step(double pos0, double posy, double u, const SkewParams& params,
                         const LatticeConfig& config) {
    const double h = config.h();
    const std::int64_t lower = to_site(pos0, h, "pos0");
    const std::int64_t upper = to_site(posy, h, "posy");
    const std::int64_t gap = upper - lower;
    if (gap < 0 || gap % 2 != 0) {
        throw std::invalid_argument("coupled_step: posy - pos0 must be a nonnegative even multiple of h");
    }
    const SiteStep s = coupled_site_step(lower, upper, u, params.beta());
    return {static_cast<double>(s.lower) * h, static_cast<double>(s.upper) * h, s.push_lower ? 1 : 0,
            s.push_upper ? 1 : 0};
}

std::vector<double> CoupledPath::x0_positions() const {
    std::vector<double> out(lower_sites.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<double>(lower_sites[i]) * h();
    return out;
}

std::vector<double> CoupledPath::xy_positions() const {
    std::vector<double> out(upper_sites.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<double>(upper_sites[i]) * h();
    return out;
}

CoupledPath simulate_coupled(const SkewParams& params, const LatticeConfig& config, UniformStream stream,
                             bool stop_at_coalescence) {
    CoupledPath path(config, params);
    run_recorded(path, 0, params.y_sites(), config.max_steps(), stop_at_coalescence,
                 [&stream] { return stream.next_uniform(); });
    return path;
}

CoupledPath simulate_coupled(const SkewParams& params, const LatticeConfig& config,
                             std::span<const double> uniforms, bool stop_at_coalescence) {
    CoupledPath path(config, params);
    const auto steps = std::min<std::int64_t>(config.max_steps(), static_cast<std::int64_t>(uniforms.size()));
    std::size_t i = 0;
    run_recorded(path, 0, params.y_sites(), steps, stop_at_coalescence, [&] { return uniforms[i++]; });
    return path;
}

CoupledPath simulate_pair(std::int64_t lower_start, std::int64_t upper_start, double beta,
                          const LatticeConfig& config, std::span<const double> uniforms) {
    const std::int64_t gap = upper_start - lower_start;
    if (gap < 0 || gap % 2 != 0) {
        throw std::invalid_argument("simulate_pair: starts must satisfy lower <= upper with even difference");
    }
    check_beta(beta);
    // A zero gap has no SkewParams; record it with the smallest legal gap and
    // let the sites speak for themselves.
    CoupledPath path(config, SkewParams::from_sites(beta, gap > 0 ? gap : 2, config), lower_start);
    const auto steps = std::min<std::int64_t>(config.max_steps(), static_cast<std::int64_t>(uniforms.size()));
    std::size_t i = 0;
    run_recorded(path, lower_start, upper_start, steps, false, [&] { return uniforms[i++]; });
    return path;
}

std::optional<std::int64_t> first_coalescence_step(const SkewParams& params, const LatticeConfig& config,
                                                    UniformStream stream) {
    std::int64_t lower = 0;
    std::int64_t upper = params.y_sites();
    const double beta = params.beta();
    const std::int64_t steps = config.max_steps();
    for (std::int64_t n = 1; n <= steps; ++n) {
        const SiteStep s = coupled_site_step(lower, upper, stream.next_uniform(), beta);
        lower = s.lower;
        upper = s.upper;
        if (lower == upper) return n;
    }
    return std::nullopt;
}

std::vector<std::int64_t> simulate_skew_walk(double beta, std::int64_t start_site, const LatticeConfig& config,
                                             UniformStream stream) {
    check_beta(beta);
    std::vector<std::int64_t> sites;
    sites.reserve(static_cast<std::size_t>(config.max_steps()) + 1);
    std::int64_t site = start_site;
    sites.push_back(site);
    for (std::int64_t n = 0; n < config.max_steps(); ++n) {
        site += skew_direction(site, stream.next_uniform(), beta);
        sites.push_back(site);
    }
    return sites;
}

std::int64_t skew_walk_endpoint(double beta, std::int64_t start_site, const LatticeConfig& config,
                                UniformStream stream) {
    check_beta(beta);
    std::int64_t site = start_site;
    for (std::int64_t n = 0; n < config.max_steps(); ++n) site += skew_direction(site, stream.next_uniform(), beta);
    return site;
}

LocalTimeSeries local_time_series(const CoupledPath& path) {
    LocalTimeSeries out{path.h(), {}, {}};
    const std::size_t n = path.lower_sites.size();
    out.hat_l0_sites.resize(n);
    out.hat_ly_sites.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.hat_l0_sites[i] = path.lower_sites[i] - path.origin_site - path.driver_sites[i];
        out.hat_ly_sites[i] = path.upper_sites[i] - path.driver_sites[i];
    }
    return out;
}

std::vector<double> visit_local_time(const CoupledPath& path) {
    std::vector<double> out(path.zero_visits_lower.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<double>(path.zero_visits_lower[i]) * path.h();
    return out;
}

std::vector<std::int64_t> gap_sites(const CoupledPath& path) {
    std::vector<std::int64_t> out(path.lower_sites.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = path.upper_sites[i] - path.lower_sites[i];
    return out;
}

std::vector<double> gap_series(const CoupledPath& path) {
    std::vector<double> out(path.lower_sites.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<double>(path.upper_sites[i] - path.lower_sites[i]) * path.h();
    }
    return out;
}

std::optional<CoalescenceTime> coalescence_time(const CoupledPath& path) {
    if (!path.coalesce_step) return std::nullopt;
    return CoalescenceTime{*path.coalesce_step, path.config.time_of(*path.coalesce_step)};
}

} // namespace skewcoal
