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
#include <vector>

#include "skewcoal/lattice.hpp"

namespace skewcoal {

/*
 * Closed-form laws of the ladder ratios for skewness beta in (0, 1]:
 *
 *   P(W < w) = w^{(1-beta)/(2beta)},  0 < w < 1
 *   P(V > v) = v^{-(1+beta)/(2beta)}, v >= 1
 *
 * so -log W ~ Exp(mean 2beta/(1-beta)), log V ~ Exp(mean 2beta/(1+beta)),
 * E W = (1-beta)/(1+beta), E V = (1+beta)/(1-beta), E[WV] = 1, and
 * -E log(WV) = 4beta^2/(1-beta^2) is the ensemble decay rate of M_k.
 *
 * Negative beta is mapped to |beta| (the mirrored pair has the same laws).
 * At beta = 1 the quantities that blow up are reported as std::nullopt and W
 * is degenerate at 0.
 */
class LawSpec {
public:
    explicit LawSpec(double beta);

    double beta() const noexcept { return beta_; }
    double w_exponent() const noexcept { return (1.0 - beta_) / (2.0 * beta_); }
    double v_exponent() const noexcept { return (1.0 + beta_) / (2.0 * beta_); }
    double w_mean() const noexcept { return (1.0 - beta_) / (1.0 + beta_); }
    std::optional<double> v_mean() const;
    std::optional<double> neg_log_w_mean() const;
    double log_v_mean() const noexcept { return 2.0 * beta_ / (1.0 + beta_); }
    std::optional<double> chain_drift() const;
    bool w_degenerate() const noexcept { return beta_ == 1.0; }

private:
    double beta_;
};

struct LawMoments {
    double w_mean;
    std::optional<double> v_mean;
    std::optional<double> neg_log_w_mean;
    double log_v_mean;
    std::optional<double> chain_drift;
};

LawMoments moments(const LawSpec& law);

double w_cdf(const LawSpec& law, double w);
double v_survival(const LawSpec& law, double v);
double v_cdf(const LawSpec& law, double v);

/// Inversion maps: W = U^{2beta/(1-beta)} (0 when degenerate), V = U^{-2beta/(1+beta)}.
double w_from_uniform(const LawSpec& law, double u);
double v_from_uniform(const LawSpec& law, double u);

double sample_w(const LawSpec& law, UniformStream& stream);
double sample_v(const LawSpec& law, UniformStream& stream);

struct ChainResult {
    std::vector<double> m;  // M_0 = y, M_1, ..., M_K
    double sum_m = 0.0;     // sum over k >= 1
    std::optional<std::int64_t> steps_to_epsilon;
    double decay_estimate = 0.0;  // log(M_K / y) / K
};

/// Multiplicative chain M_k = M_{k-1} W_k V_k with fresh (W, V) from the
/// closed-form laws. Stops after k_max factors or once M_k <= epsilon.
/// Products are accumulated in log space, so deep decay does not underflow
/// the estimate. Throws std::invalid_argument unless y > 0, 0 < epsilon < y
/// and k_max >= 1.
ChainResult chain_simulate(const LawSpec& law, double y, UniformStream stream, std::int64_t k_max, double epsilon);

/// Exact law of the first shrink ratio on the lattice: for a gap of 2m sites,
/// element j is P(D(S_0) = 2j sites), j = 1..m, and element 0 is the
/// probability that the pair coalesces before S_0. Per visit of X^0 to 0 the
/// gap d shrinks by 2 with probability beta/2 and the shrink phase ends with
/// probability (1-beta)/(2d) (a negative excursion of depth d).
std::vector<double> lattice_w_pmf(double beta, std::int64_t gap_sites);

/// Kolmogorov distance between lattice_w_pmf (atoms at j/m) and w_cdf.
double lattice_w_ks_floor(double beta, std::int64_t gap_sites);

} // namespace skewcoal
