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

#include "skewcoal/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace skewcoal {

LawSpec::LawSpec(double beta) : beta_(std::abs(beta)) {
    if (!(beta_ > 0.0 && beta_ <= 1.0)) {
        throw std::invalid_argument("LawSpec: |beta| must lie in (0, 1], got " + std::to_string(beta));
    }
}

std::optional<double> LawSpec::v_mean() const {
    if (beta_ == 1.0) return std::nullopt;
    return (1.0 + beta_) / (1.0 - beta_);
}

std::optional<double> LawSpec::neg_log_w_mean() const {
    if (beta_ == 1.0) return std::nullopt;
    return 2.0 * beta_ / (1.0 - beta_);
}

std::optional<double> LawSpec::chain_drift() const {
    if (beta_ == 1.0) return std::nullopt;
    return 4.0 * beta_ * beta_ / (1.0 - beta_ * beta_);
}

LawMoments moments(const LawSpec& law) {
    return {law.w_mean(), law.v_mean(), law.neg_log_w_mean(), law.log_v_mean(), law.chain_drift()};
}

double w_cdf(const LawSpec& law, double w) {
    if (w <= 0.0) return 0.0;
    if (w >= 1.0) return 1.0;
    return std::pow(w, law.w_exponent());
}

double v_survival(const LawSpec& law, double v) {
    if (v <= 1.0) return 1.0;
    return std::pow(v, -law.v_exponent());
}

double v_cdf(const LawSpec& law, double v) { return 1.0 - v_survival(law, v); }

double w_from_uniform(const LawSpec& law, double u) {
    if (law.w_degenerate()) return 0.0;
    return std::pow(u, 1.0 / law.w_exponent());
}

double v_from_uniform(const LawSpec& law, double u) { return std::pow(u, -1.0 / law.v_exponent()); }

double sample_w(const LawSpec& law, UniformStream& stream) {
    return w_from_uniform(law, stream.next_open_uniform());
}

double sample_v(const LawSpec& law, UniformStream& stream) {
    return v_from_uniform(law, stream.next_open_uniform());
}

ChainResult chain_simulate(const LawSpec& law, double y, UniformStream stream, std::int64_t k_max, double epsilon) {
    if (!(y > 0.0)) throw std::invalid_argument("chain_simulate: y must be positive");
    if (!(epsilon > 0.0 && epsilon < y)) throw std::invalid_argument("chain_simulate: need 0 < epsilon < y");
    if (k_max < 1) throw std::invalid_argument("chain_simulate: k_max must be >= 1");

    ChainResult out;
    out.m.reserve(static_cast<std::size_t>(k_max) + 1);
    out.m.push_back(y);
    const double log_y = std::log(y);
    const double log_eps = std::log(epsilon);
    double log_m = log_y;
    std::int64_t k = 0;
    while (k < k_max) {
        // log W = log(U) / w_exponent, log V = -log(U') / v_exponent
        const double u_w = stream.next_open_uniform();
        const double u_v = stream.next_open_uniform();
        const double log_w = law.w_degenerate() ? -INFINITY : std::log(u_w) / law.w_exponent();
        log_m += log_w - std::log(u_v) / law.v_exponent();
        ++k;
        const double m = std::exp(log_m);
        out.m.push_back(m);
        out.sum_m += m;
        if (log_m <= log_eps) {
            out.steps_to_epsilon = k;
            break;
        }
    }
    out.decay_estimate = (log_m - log_y) / static_cast<double>(k);
    return out;
}

std::vector<double> lattice_w_pmf(double beta, std::int64_t gap_sites) {
    if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("lattice_w_pmf: beta must lie in (0, 1]");
    if (gap_sites <= 0 || gap_sites % 2 != 0) {
        throw std::invalid_argument("lattice_w_pmf: gap must be a positive even number of sites");
    }
    const std::int64_t m = gap_sites / 2;
    std::vector<double> pmf(static_cast<std::size_t>(m) + 1, 0.0);
    double alive = 1.0;
    const double push = 0.5 * beta;
    for (std::int64_t j = m; j >= 1; --j) {
        const double stop = (1.0 - beta) / (2.0 * static_cast<double>(2 * j));
        pmf[static_cast<std::size_t>(j)] = alive * stop / (stop + push);
        alive *= push / (stop + push);
    }
    pmf[0] = alive;
    return pmf;
}

double lattice_w_ks_floor(double beta, std::int64_t gap_sites) {
    const std::vector<double> pmf = lattice_w_pmf(beta, gap_sites);
    const LawSpec law(beta);
    const auto m = static_cast<double>(pmf.size() - 1);
    double below = 0.0;
    double sup = 0.0;
    for (std::size_t j = 0; j < pmf.size(); ++j) {
        const double f = w_cdf(law, static_cast<double>(j) / m);
        sup = std::max(sup, std::abs(below - f));
        below += pmf[j];
        sup = std::max(sup, std::abs(below - f));
    }
    return sup;
}

} // namespace skewcoal
