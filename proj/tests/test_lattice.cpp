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
#include <vector>

#include "skewcoal/lattice.hpp"
#include "skewcoal/parallel.hpp"
#include "skewcoal/stats.hpp"

namespace skewcoal {
namespace {

std::vector<double> draws(UniformStream s, std::size_t n) {
    std::vector<double> out(n);
    for (auto& u : out) u = s.next_uniform();
    return out;
}

TEST(Mix64, MatchesSplitMix64ReferenceOutput) {
    // First output of the reference SplitMix64 generator seeded with 0.
    EXPECT_EQ(mix64(kGoldenGamma), 0xe220a8397b1dcdafULL);
}

TEST(LatticeConfig, TimeStepIsSquareOfSpaceStep) {
    const LatticeConfig cfg(0.01, 100);
    EXPECT_EQ(cfg.dt(), 0.01 * 0.01);
    EXPECT_EQ(cfg.time_of(3), 3 * cfg.dt());
    EXPECT_EQ(cfg.with_max_steps(7).max_steps(), 7);
    EXPECT_EQ(cfg.with_max_steps(7).h(), 0.01);
}

TEST(LatticeConfig, RejectsBadDomain) {
    EXPECT_THROW(LatticeConfig(0.0, 10), std::invalid_argument);
    EXPECT_THROW(LatticeConfig(-0.1, 10), std::invalid_argument);
    EXPECT_THROW(LatticeConfig(NAN, 10), std::invalid_argument);
    EXPECT_THROW(LatticeConfig(0.1, 0), std::invalid_argument);
}

TEST(UniformStream, ReplayIsBitIdentical) {
    EXPECT_EQ(draws(derive_stream(42, 0), 1000), draws(derive_stream(42, 0), 1000));
}

TEST(UniformStream, DistinctReplicatesDifferInFirst64Draws) {
    const auto a = draws(derive_stream(42, 0), 64);
    const auto b = draws(derive_stream(42, 1), 64);
    int equal = 0;
    for (std::size_t i = 0; i < a.size(); ++i) equal += a[i] == b[i];
    EXPECT_EQ(equal, 0);
}

TEST(UniformStream, LanesAndSeedsAreDistinct) {
    const auto base = draws(derive_stream(42, 0), 16);
    EXPECT_NE(base, draws(derive_stream(42, 0).substream(1), 16));
    EXPECT_NE(base, draws(derive_stream(43, 0), 16));
}

TEST(UniformStream, PositionTracksDraws) {
    UniformStream s = derive_stream(1, 2);
    EXPECT_EQ(s.position(), 0u);
    next_uniform(s);
    s.next_bits();
    EXPECT_EQ(s.position(), 2u);
    UniformStream resumed(1, 2, 0, 2);
    EXPECT_EQ(resumed, s);
    EXPECT_EQ(resumed.next_uniform(), s.next_uniform());
}

TEST(UniformStream, RangeMeanAndKs) {
    constexpr std::size_t n = 1'000'000;
    UniformStream s = derive_stream(42, 0);
    std::vector<double> u(n);
    for (auto& x : u) {
        x = s.next_uniform();
        ASSERT_GE(x, 0.0);
        ASSERT_LT(x, 1.0);
    }
    EXPECT_NEAR(sample_mean(u), 0.5, 0.002);
    std::sort(u.begin(), u.end());
    EXPECT_LE(ks_statistic(u, [](double x) { return x; }), dkw_epsilon(n, 0.01));
}

TEST(UniformStream, OpenUniformNeverHitsEndpoints) {
    UniformStream s = derive_stream(3, 0);
    for (int i = 0; i < 100000; ++i) {
        const double u = s.next_open_uniform();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(DriverSign, StrictHalfConvention) {
    EXPECT_EQ(driver_sign(0.3), +1);
    EXPECT_EQ(driver_sign(0.5), -1);
    EXPECT_EQ(driver_sign(0.9), -1);
    EXPECT_EQ(driver_sign(0.0), +1);
}

TEST(DriverSign, RandomWalkHasDiffusiveVariance) {
    // B_{1/dt} at h = 0.01 over 10^4 replicates: mean 0, variance 1.
    const LatticeConfig cfg(0.01, 10'000);
    std::vector<double> endpoints;
    for (std::uint64_t r = 0; r < 10'000; ++r) {
        UniformStream s = derive_stream(11, r);
        std::int64_t b = 0;
        for (std::int64_t n = 0; n < cfg.max_steps(); ++n) b += driver_sign(s.next_uniform());
        endpoints.push_back(static_cast<double>(b) * cfg.h());
    }
    EXPECT_NEAR(sample_mean(endpoints), 0.0, 3.0 / 100.0);
    EXPECT_NEAR(sample_variance(endpoints), 1.0, 0.02);
}

TEST(MapReplicates, ResultsIndependentOfThreadCount) {
    auto fn = [](std::size_t i) { return draws(derive_stream(42, i), 8); };
    EXPECT_EQ(map_replicates(200, 1, fn), map_replicates(200, 8, fn));
}

TEST(MapReplicates, PropagatesExceptions) {
    auto fn = [](std::size_t i) -> int {
        if (i == 17) throw std::runtime_error("boom");
        return 0;
    };
    EXPECT_THROW(map_replicates(50, 4, fn), std::runtime_error);
    EXPECT_TRUE(map_replicates(0, 4, fn).empty());
}

} // namespace
} // namespace skewcoal
