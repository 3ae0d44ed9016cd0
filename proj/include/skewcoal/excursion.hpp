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

/// One excursion from 0: positions are nonzero with constant sign strictly
/// between `start` (last zero before) and `end` (first zero after).
/// local_time_clock is h times the number of zeros seen before `start`.
struct ExcursionRecord {
    std::int64_t start = 0;
    std::int64_t end = 0;
    int sign = 0;
    double height = 0.0;
    double local_time_clock = 0.0;
};

enum class SignFilter { Positive, Negative, Both };

/// Streaming excursion decomposition over lattice sites. Positions before the
/// first zero are skipped. Throws std::invalid_argument if the path changes
/// sign without visiting 0.
class ExcursionScanner {
public:
    explicit ExcursionScanner(double h, bool keep_records = true) : h_(h), keep_(keep_records) {}

    /// Returns the excursion completed by this observation, if any.
    std::optional<ExcursionRecord> observe(std::int64_t site);

    const std::vector<ExcursionRecord>& completed() const noexcept { return completed_; }
    /// Excursion in progress, with end = -1 and its running height.
    std::optional<ExcursionRecord> trailing() const;

    std::int64_t zero_visits() const noexcept { return zero_visits_; }
    bool seen_zero() const noexcept { return zero_visits_ > 0; }
    bool in_excursion() const noexcept { return in_excursion_; }
    int current_sign() const noexcept { return sign_; }
    std::int64_t current_height_sites() const noexcept { return max_abs_; }
    /// Zeros observed before the current (or upcoming) excursion's start.
    std::int64_t current_clock_visits() const noexcept { return start_visits_; }
    double h() const noexcept { return h_; }

private:
    double h_;
    bool keep_;
    std::int64_t index_ = 0;
    std::int64_t zero_visits_ = 0;
    std::int64_t last_zero_ = -1;
    std::int64_t start_visits_ = 0;
    bool in_excursion_ = false;
    int sign_ = 0;
    std::int64_t max_abs_ = 0;
    std::vector<ExcursionRecord> completed_;
};

struct Decomposition {
    std::vector<ExcursionRecord> excursions;
    /// Final excursion without a terminating zero (excluded from the list).
    std::optional<ExcursionRecord> incomplete;
    std::int64_t zero_visits = 0;
};

Decomposition decompose(std::span<const std::int64_t> sites, double h);
/// Real positions are snapped to the nearest site.
Decomposition decompose(std::span<const double> positions, double h);

/// Skew walk by excursion flipping: a symmetric walk from 0 driven by lane 0
/// of `stream`; each negative excursion is reflected to the positive side iff
/// an independent uniform from lane 1 is < |beta|. The decision is drawn when
/// the excursion starts, so a trailing unfinished excursion is flipped too.
/// For beta < 0 the whole output is negated. Returns sites for steps
/// 0..config.max_steps().
std::vector<std::int64_t> flip_construct(const LatticeConfig& config, double beta, UniformStream stream);

/// Endpoint of flip_construct without recording the path.
std::int64_t flip_construct_endpoint(const LatticeConfig& config, double beta, UniformStream stream);

/// Counts excursions with matching sign, height > threshold and
/// local_time_clock < clock_limit. A trailing unfinished excursion counts once
/// its running height already exceeds the threshold (height only grows).
class IntensityCounter {
public:
    /// Throws std::invalid_argument unless threshold >= 2h and clock_limit > 0.
    IntensityCounter(double h, double threshold, double clock_limit, SignFilter filter);

    void observe(std::int64_t site);

    /// Every excursion with clock < clock_limit has been decided.
    bool resolved() const noexcept;
    std::int64_t count() const noexcept;
    const ExcursionScanner& scanner() const noexcept { return scanner_; }

private:
    bool matches(int sign, std::int64_t height_sites) const noexcept;
    bool clock_within(std::int64_t visits) const noexcept {
        return static_cast<double>(visits) * scanner_.h() < clock_limit_;
    }

    ExcursionScanner scanner_;
    double threshold_sites_;
    double clock_limit_;
    SignFilter filter_;
    std::int64_t completed_count_ = 0;
};

struct IntensityResult {
    std::int64_t count = 0;
    /// The path ran out before every excursion with clock < clock_limit was
    /// decided; count covers the available clock only.
    bool truncated = false;
};

IntensityResult intensity_count(std::span<const std::int64_t> sites, double h, double height_threshold,
                                double clock_limit, SignFilter filter);
IntensityResult intensity_count(std::span<const double> positions, double h, double height_threshold,
                                double clock_limit, SignFilter filter);

/// Runs a single skew walk from 0 (lane 0 of `stream`) until every excursion
/// with clock < clock_limit is decided or config.max_steps() is reached.
/// When `excursions` is non-null the completed excursions are appended.
IntensityResult walk_intensity_count(double beta, const LatticeConfig& config, UniformStream stream,
                                     double height_threshold, double clock_limit, SignFilter filter,
                                     std::vector<ExcursionRecord>* excursions = nullptr);

} // namespace skewcoal
