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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "skewcoal/lattice.hpp"
#include "skewcoal/stats.hpp"

namespace skewcoal {
namespace {

const auto kUniformCdf = [](double x) { return std::clamp(x, 0.0, 1.0); };

TEST(KsStatistic, ThreePointExample) {
    const std::vector<double> x{0.25, 0.5, 0.75};
    EXPECT_DOUBLE_EQ(ks_statistic(x, kUniformCdf), 0.25);
}

TEST(KsStatistic, QuantileSampleGivesHalfOverN) {
    for (const int n : {1, 7, 100}) {
        std::vector<double> x;
        for (int i = 1; i <= n; ++i) x.push_back((i - 0.5) / n);
        EXPECT_NEAR(ks_statistic(x, kUniformCdf), 0.5 / n, 1e-15);
    }
}

TEST(KsStatistic, SinglePointAtMedian) {
    const std::vector<double> x{0.0};
    EXPECT_DOUBLE_EQ(ks_statistic(x, [](double v) { return v < 0 ? 0.0 : 0.5; }), 0.5);
}

TEST(KsStatistic, RejectsEmptyOrUnsorted) {
    const std::vector<double> empty;
    EXPECT_THROW(ks_statistic(empty, kUniformCdf), std::invalid_argument);
    const std::vector<double> unsorted{0.5, 0.2};
    EXPECT_THROW(ks_statistic(unsorted, kUniformCdf), std::invalid_argument);
}

TEST(KsStatistic, InvariantUnderIncreasingTransform) {
    UniformStream s = derive_stream(1, 0);
    std::vector<double> x(500), y(500);
    for (auto& v : x) v = s.next_uniform();
    std::sort(x.begin(), x.end());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::exp(3.0 * x[i]);
    const double a = ks_statistic(x, kUniformCdf);
    const double b = ks_statistic(y, [](double v) { return std::clamp(std::log(v) / 3.0, 0.0, 1.0); });
    EXPECT_NEAR(a, b, 1e-12);
}

TEST(KsTwoSample, KnownValues) {
    EXPECT_DOUBLE_EQ(ks_two_sample({1, 2, 3}, {1, 2, 3}), 0.0);
    EXPECT_DOUBLE_EQ(ks_two_sample({1, 2}, {3, 4}), 1.0);
    EXPECT_DOUBLE_EQ(ks_two_sample({1, 3}, {2, 4}), 0.5);
    // Ties across samples are stepped together.
    EXPECT_DOUBLE_EQ(ks_two_sample({0, 0, 1}, {0, 1, 1}), 1.0 / 3.0);
    EXPECT_THROW(ks_two_sample({}, {1.0}), std::invalid_argument);
}

TEST(Dkw, ReferenceValues) {
    EXPECT_NEAR(dkw_epsilon(2000, 0.05), 0.03036, 1e-5);
    EXPECT_NEAR(dkw_epsilon(100'000, 0.05), 0.00430, 1e-5);
    EXPECT_NEAR(dkw_epsilon(1'000'000, 0.01), 0.00163, 5e-6);
    EXPECT_NEAR(dkw_two_sample_epsilon(1000, 1000, 0.05), 0.0607, 5e-5);
    EXPECT_NEAR(dkw_two_sample_epsilon(2000, 2000, 0.05), 0.0429, 5e-5);
}

TEST(Dkw, Monotonicity) {
    for (std::size_t n = 10; n < 100'000; n *= 4) {
        EXPECT_GT(dkw_epsilon(n, 0.05), dkw_epsilon(n + 1, 0.05));
        EXPECT_NEAR(dkw_epsilon(n, 0.05) / dkw_epsilon(4 * n, 0.05), 2.0, 1e-12);
    }
    double prev = INFINITY;
    for (const double d : {0.001, 0.01, 0.05, 0.5, 0.999}) {
        EXPECT_LT(dkw_epsilon(100, d), prev);
        prev = dkw_epsilon(100, d);
    }
    EXPECT_THROW(dkw_epsilon(0, 0.05), std::invalid_argument);
    EXPECT_THROW(dkw_epsilon(10, 0.0), std::invalid_argument);
    EXPECT_THROW(dkw_epsilon(10, 1.0), std::invalid_argument);
}

TEST(MeanCi, Examples) {
    const std::vector<double> c(10, 3.0);
    EXPECT_EQ(mean_ci(c, 3.0).halfwidth, 0.0);
    EXPECT_EQ(mean_ci(c, 3.0).mean, 3.0);
    const std::vector<double> two{0.0, 1.0};
    const MeanCI ci = mean_ci(two, 3.0);
    EXPECT_DOUBLE_EQ(ci.mean, 0.5);
    EXPECT_DOUBLE_EQ(ci.halfwidth, 1.5);
    const std::vector<double> one{1.0};
    EXPECT_THROW(mean_ci(one, 3.0), std::invalid_argument);
}

TEST(MeanCi, CoversUniformMean) {
    UniformStream s = derive_stream(2, 0);
    std::vector<double> u(100'000);
    for (auto& v : u) v = s.next_uniform();
    const MeanCI ci = mean_ci(u, 3.0);
    EXPECT_LE(std::abs(ci.mean - 0.5), ci.halfwidth);
}

TEST(SampleMoments, VarianceAndCorrelation) {
    const std::vector<double> x{1, 2, 3, 4};
    EXPECT_DOUBLE_EQ(sample_mean(x), 2.5);
    EXPECT_DOUBLE_EQ(sample_variance(x), 5.0 / 3.0);
    const std::vector<double> y{2, 4, 6, 8};
    const std::vector<double> z{4, 3, 2, 1};
    EXPECT_NEAR(sample_correlation(x, y), 1.0, 1e-15);
    EXPECT_NEAR(sample_correlation(x, z), -1.0, 1e-15);
}

TEST(Quantile, LinearInterpolation) {
    EXPECT_DOUBLE_EQ(quantile({3, 1, 2}, 0.5), 2.0);
    EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 0.5), 2.5);
    EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 1.0), 4.0);
}

TEST(PoissonMeanCheck, Examples) {
    const std::vector<std::int64_t> exact(1000, 5);
    EXPECT_TRUE(poisson_mean_check(exact, 5.0, 3.0, 0.1).passed);
    const std::vector<std::int64_t> zeros(1000, 0);
    const TestVerdict v = poisson_mean_check(zeros, 5.0, 3.0, 0.1);
    EXPECT_FALSE(v.passed);
    EXPECT_DOUBLE_EQ(v.statistic, 5.0);
    EXPECT_NEAR(v.threshold, 3.0 * std::sqrt(5.0 / 1000.0) + 0.5, 1e-12);
    EXPECT_EQ(v.n, 1000u);
}

TEST(PoissonMeanCheck, SimulatedPoissonPasses) {
    std::mt19937_64 gen(12345);
    std::poisson_distribution<std::int64_t> pois(5.0);
    std::vector<std::int64_t> counts(1000);
    for (auto& c : counts) c = pois(gen);
    EXPECT_TRUE(poisson_mean_check(counts, 5.0, 3.0, 0.1).passed);
}

TEST(TestVerdict, PassedIffWithinThreshold) {
    EXPECT_TRUE(TestVerdict::make("a", 1.0, 1.0, 1).passed);
    EXPECT_FALSE(TestVerdict::make("b", 1.5, 1.0, 1).passed);
    EXPECT_FALSE(TestVerdict::make("c", NAN, 1.0, 1).passed);
}

} // namespace
} // namespace skewcoal
