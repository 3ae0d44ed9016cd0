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

#include "skewcoal/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace skewcoal {

double ks_statistic(std::span<const double> sorted_sample, const std::function<double(double)>& cdf) {
    if (sorted_sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    if (!std::is_sorted(sorted_sample.begin(), sorted_sample.end())) {
        throw std::invalid_argument("ks_statistic: sample must be sorted");
    }
    const auto n = static_cast<double>(sorted_sample.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < sorted_sample.size(); ++i) {
        const double f = cdf(sorted_sample[i]);
        const double upper = static_cast<double>(i + 1) / n;
        const double lower = static_cast<double>(i) / n;
        sup = std::max({sup, std::abs(upper - f), std::abs(lower - f)});
    }
    return sup;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const auto na = static_cast<double>(a.size());
    const auto nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double sup = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        sup = std::max(sup, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return sup;
}

double dkw_epsilon(std::size_t n, double delta) {
    if (n == 0) throw std::invalid_argument("dkw_epsilon: n must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("dkw_epsilon: delta must lie in (0, 1)");
    return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

double dkw_two_sample_epsilon(std::size_t n, std::size_t m, double delta) {
    if (n == 0 || m == 0) throw std::invalid_argument("dkw_two_sample_epsilon: sizes must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("dkw_two_sample_epsilon: delta must lie in (0, 1)");
    const auto dn = static_cast<double>(n);
    const auto dm = static_cast<double>(m);
    return std::sqrt(std::log(2.0 / delta) * (dn + dm) / (2.0 * dn * dm));
}

double sample_mean(std::span<const double> sample) {
    if (sample.empty()) throw std::invalid_argument("sample_mean: empty sample");
    long double s = 0.0L;
    for (const double x : sample) s += x;
    return static_cast<double>(s / static_cast<long double>(sample.size()));
}

double sample_variance(std::span<const double> sample) {
    if (sample.size() < 2) throw std::invalid_argument("sample_variance: need at least 2 points");
    const double m = sample_mean(sample);
    long double ss = 0.0L;
    for (const double x : sample) ss += static_cast<long double>(x - m) * (x - m);
    return static_cast<double>(ss / static_cast<long double>(sample.size() - 1));
}

MeanCI mean_ci(std::span<const double> sample, double z) {
    if (sample.size() < 2) throw std::invalid_argument("mean_ci: need at least 2 points");
    const double sd = std::sqrt(sample_variance(sample));
    return {sample_mean(sample), z * sd / std::sqrt(static_cast<double>(sample.size()))};
}

double sample_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("sample_correlation: bad sizes");
    const double mx = sample_mean(x);
    const double my = sample_mean(y);
    long double sxy = 0.0L, sxx = 0.0L, syy = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const long double dx = x[i] - mx;
        const long double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0L || syy == 0.0L) return 0.0;
    return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

TestVerdict poisson_mean_check(std::span<const std::int64_t> counts, double lambda, double z, double allowance,
                               std::string description) {
    if (counts.empty()) throw std::invalid_argument("poisson_mean_check: empty counts");
    long double s = 0.0L;
    for (const auto c : counts) s += static_cast<long double>(c);
    const auto n = static_cast<double>(counts.size());
    const double mean = static_cast<double>(s / counts.size());
    const double bound = z * std::sqrt(lambda / n) + allowance * lambda;
    return TestVerdict::make(std::move(description), std::abs(mean - lambda), bound, counts.size());
}

double quantile(std::vector<double> sample, double q) {
    if (sample.empty()) throw std::invalid_argument("quantile: empty sample");
    std::sort(sample.begin(), sample.end());
    const double pos = q * static_cast<double>(sample.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sample.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sample[lo] + frac * (sample[hi] - sample[lo]);
}

} // namespace skewcoal
