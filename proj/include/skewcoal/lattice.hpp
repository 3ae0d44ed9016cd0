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
#include <stdexcept>

namespace skewcoal {

/// Discretization frame shared by every simulation: space step h, time step
/// h^2 (diffusive scaling) and a horizon in steps.
class LatticeConfig {
public:
    LatticeConfig(double space_step, std::int64_t max_steps);

    double h() const noexcept { return h_; }
    double dt() const noexcept { return dt_; }
    std::int64_t max_steps() const noexcept { return max_steps_; }

    /// Physical time of step n.
    double time_of(std::int64_t step) const noexcept { return static_cast<double>(step) * dt_; }

    LatticeConfig with_max_steps(std::int64_t max_steps) const { return {h_, max_steps}; }

private:
    double h_;
    double dt_;
    std::int64_t max_steps_;
};

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/*
 * Counter-based uniform stream.
 *
 * The output at a given position is a pure function of
 * (master_seed, replicate_index, lane, position):
 *
 *   key  = mix64(mix64(master_seed) ^ mix64(replicate_index * C1 + lane * C2 + 1))
 *   bits = mix64(key + (position + 1) * golden_gamma)
 *   u    = (bits >> 11) * 2^-53
 *
 * which is SplitMix64 seeded with a per-(replicate, lane) key. Nothing depends
 * on thread scheduling, so replicate r produces the same draws whichever
 * worker runs it. Lane 0 is the driving noise; other lanes are auxiliary
 * substreams (e.g. excursion flip decisions).
 */
class UniformStream {
public:
    UniformStream(std::uint64_t master_seed, std::uint64_t replicate_index, std::uint64_t lane = 0,
                  std::uint64_t position = 0) noexcept;

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::uint64_t replicate_index() const noexcept { return replicate_index_; }
    std::uint64_t lane() const noexcept { return lane_; }
    std::uint64_t position() const noexcept { return position_; }

    /// Raw 64 bits at the current position; advances by one.
    std::uint64_t next_bits() noexcept { return mix64(key_ + (++position_) * kGoldenGamma); }

    /// u in [0, 1) on the 2^-53 grid.
    double next_uniform() noexcept {
        return static_cast<double>(next_bits() >> 11) * 0x1.0p-53;
    }

    /// u in (0, 1): midpoint of the 2^-53 cell, never 0 or 1.
    double next_open_uniform() noexcept {
        return (static_cast<double>(next_bits() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Independent substream for the same replicate, starting at position 0.
    UniformStream substream(std::uint64_t lane) const noexcept {
        return {master_seed_, replicate_index_, lane, 0};
    }

    friend bool operator==(const UniformStream& a, const UniformStream& b) noexcept {
        return a.key_ == b.key_ && a.position_ == b.position_ && a.master_seed_ == b.master_seed_ &&
               a.replicate_index_ == b.replicate_index_ && a.lane_ == b.lane_;
    }

private:
    std::uint64_t master_seed_;
    std::uint64_t replicate_index_;
    std::uint64_t lane_;
    std::uint64_t position_;
    std::uint64_t key_;
};

/// Per-replicate stream for the driving noise.
inline UniformStream derive_stream(std::uint64_t master_seed, std::uint64_t replicate_index) noexcept {
    return {master_seed, replicate_index, 0, 0};
}

inline double next_uniform(UniformStream& stream) noexcept { return stream.next_uniform(); }

/// Increment sign of the shared driver: +1 iff u < 1/2.
constexpr int driver_sign(double u) noexcept { return u < 0.5 ? +1 : -1; }

} // namespace skewcoal
