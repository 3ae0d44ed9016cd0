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
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace skewcoal {

/// A pass/fail verdict. passed <=> statistic <= threshold.
struct TestVerdict {
    double statistic = 0.0;
    double threshold = 0.0;
    std::size_t n = 0;
    bool passed = false;
    std::string description;

    static TestVerdict make(std::string description, double statistic, double threshold, std::size_t n) {
        return {statistic, threshold, n, statistic <= threshold, std::move(description)};
    }
};

/// One-sample Kolmogorov-Smirnov distance of a sorted sample to `cdf`:
/// max_i max(|i/n - F(x_i)|, |(i-1)/n - F(x_i)|).
/// Throws std::invalid_argument on an empty or unsorted sample.
double ks_statistic(std::span<const double> sorted_sample, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov distance; samples need not be sorted.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// DKW radius sqrt(ln(2/delta) / (2n)): P(KS > eps) <= delta under the null.
double dkw_epsilon(std::size_t n, double delta);

/// Two-sample analogue sqrt(ln(2/delta) (n+m) / (2nm)).
double dkw_two_sample_epsilon(std::size_t n, std::size_t m, double delta);

struct MeanCI {
    double mean;
    double halfwidth;
};

/// Sample mean and z * sd / sqrt(n) with the n-1 variance. Requires n >= 2.
MeanCI mean_ci(std::span<const double> sample, double z);

double sample_mean(std::span<const double> sample);
/// Unbiased (n-1) variance. Requires n >= 2.
double sample_variance(std::span<const double> sample);
double sample_correlation(std::span<const double> x, std::span<const double> y);

/// Passes iff |mean(counts) - lambda| <= z sqrt(lambda/n) + allowance * lambda.
TestVerdict poisson_mean_check(std::span<const std::int64_t> counts, double lambda, double z, double allowance,
                               std::string description = "poisson mean");

/// Empirical quantile by linear interpolation on a copy of the sample.
double quantile(std::vector<double> sample, double q);

} // namespace skewcoal
