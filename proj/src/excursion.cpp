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

#include "skewcoal/excursion.hpp"

#include <cmath>
#include <stdexcept>

#include "skewcoal/coupled.hpp"

namespace skewcoal {

std::optional<ExcursionRecord> ExcursionScanner::observe(std::int64_t site) {
    std::optional<ExcursionRecord> done;
    const std::int64_t i = index_++;
    if (site == 0) {
        if (in_excursion_) {
            done = ExcursionRecord{last_zero_, i, sign_, static_cast<double>(max_abs_) * h_,
                                   static_cast<double>(start_visits_) * h_};
            if (keep_) completed_.push_back(*done);
            in_excursion_ = false;
        }
        last_zero_ = i;
        start_visits_ = zero_visits_++;
        return done;
    }
    if (last_zero_ < 0) return done;
    const int s = site > 0 ? +1 : -1;
    const std::int64_t a = site > 0 ? site : -site;
    if (!in_excursion_) {
        in_excursion_ = true;
        sign_ = s;
        max_abs_ = a;
    } else {
        if (s != sign_) throw std::invalid_argument("excursion: path changes sign without visiting 0");
        if (a > max_abs_) max_abs_ = a;
    }
    return done;
}

std::optional<ExcursionRecord> ExcursionScanner::trailing() const {
    if (!in_excursion_) return std::nullopt;
    return ExcursionRecord{last_zero_, -1, sign_, static_cast<double>(max_abs_) * h_,
                           static_cast<double>(start_visits_) * h_};
}

Decomposition decompose(std::span<const std::int64_t> sites, double h) {
    ExcursionScanner scanner(h);
    for (const std::int64_t s : sites) scanner.observe(s);
    return {scanner.completed(), scanner.trailing(), scanner.zero_visits()};
}

Decomposition decompose(std::span<const double> positions, double h) {
    std::vector<std::int64_t> sites(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) sites[i] = std::llround(positions[i] / h);
    return decompose(std::span<const std::int64_t>(sites), h);
}

namespace {

// Drives the symmetric walk and the flip lane; calls emit(site) per step.
template <class Emit>
void run_flip(const LatticeConfig& config, double beta, UniformStream stream, Emit&& emit) {
    if (!(std::abs(beta) <= 1.0)) throw std::invalid_argument("flip_construct: beta must lie in [-1, 1]");
    const double p = std::abs(beta);
    const std::int64_t orient = beta < 0.0 ? -1 : +1;
    UniformStream flips = stream.substream(1);
    std::int64_t walk = 0;
    bool flipped = false;
    emit(0);
    for (std::int64_t n = 0; n < config.max_steps(); ++n) {
        const int step = driver_sign(stream.next_uniform());
        if (walk == 0) flipped = step < 0 && flips.next_uniform() < p;
        walk += step;
        emit(orient * (flipped ? -walk : walk));
    }
}

} // namespace

std::vector<std::int64_t> flip_construct(const LatticeConfig& config, double beta, UniformStream stream) {
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(config.max_steps()) + 1);
    run_flip(config, beta, stream, [&](std::int64_t s) { out.push_back(s); });
    return out;
}

std::int64_t flip_construct_endpoint(const LatticeConfig& config, double beta, UniformStream stream) {
    std::int64_t last = 0;
    run_flip(config, beta, stream, [&](std::int64_t s) { last = s; });
    return last;
}

IntensityCounter::IntensityCounter(double h, double threshold, double clock_limit, SignFilter filter)
    : scanner_(h, false), threshold_sites_(threshold / h), clock_limit_(clock_limit), filter_(filter) {
    if (!(threshold >= 2.0 * h * (1.0 - 1e-12))) {
        throw std::invalid_argument("intensity_count: height threshold must be at least 2h");
    }
    if (!(clock_limit > 0.0)) throw std::invalid_argument("intensity_count: clock limit must be positive");
}

bool IntensityCounter::matches(int sign, std::int64_t height_sites) const noexcept {
    if (filter_ == SignFilter::Positive && sign < 0) return false;
    if (filter_ == SignFilter::Negative && sign > 0) return false;
    return static_cast<double>(height_sites) > threshold_sites_ + 1e-9;
}

void IntensityCounter::observe(std::int64_t site) {
    if (auto done = scanner_.observe(site)) {
        const auto height_sites = std::llround(done->height / scanner_.h());
        if (done->local_time_clock < clock_limit_ && matches(done->sign, height_sites)) ++completed_count_;
    }
}

bool IntensityCounter::resolved() const noexcept {
    if (!scanner_.seen_zero()) return false;
    const std::int64_t z = scanner_.zero_visits();
    if (!scanner_.in_excursion()) return !clock_within(z - 1);
    if (clock_within(z)) return false;
    return !clock_within(z - 1) || matches(scanner_.current_sign(), scanner_.current_height_sites()) ||
           (filter_ == SignFilter::Positive && scanner_.current_sign() < 0) ||
           (filter_ == SignFilter::Negative && scanner_.current_sign() > 0);
}

std::int64_t IntensityCounter::count() const noexcept {
    std::int64_t c = completed_count_;
    if (scanner_.in_excursion() && clock_within(scanner_.current_clock_visits()) &&
        matches(scanner_.current_sign(), scanner_.current_height_sites())) {
        ++c;
    }
    return c;
}

IntensityResult intensity_count(std::span<const std::int64_t> sites, double h, double height_threshold,
                                double clock_limit, SignFilter filter) {
    IntensityCounter counter(h, height_threshold, clock_limit, filter);
    for (const std::int64_t s : sites) counter.observe(s);
    return {counter.count(), !counter.resolved()};
}

IntensityResult intensity_count(std::span<const double> positions, double h, double height_threshold,
                                double clock_limit, SignFilter filter) {
    std::vector<std::int64_t> sites(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) sites[i] = std::llround(positions[i] / h);
    return intensity_count(std::span<const std::int64_t>(sites), h, height_threshold, clock_limit, filter);
}

IntensityResult walk_intensity_count(double beta, const LatticeConfig& config, UniformStream stream,
                                     double height_threshold, double clock_limit, SignFilter filter,
                                     std::vector<ExcursionRecord>* excursions) {
    IntensityCounter counter(config.h(), height_threshold, clock_limit, filter);
    ExcursionScanner recorder(config.h(), false);
    std::int64_t site = 0;
    counter.observe(site);
    if (excursions) recorder.observe(site);
    for (std::int64_t n = 0; n < config.max_steps() && !counter.resolved(); ++n) {
        site += skew_direction(site, stream.next_uniform(), beta);
        counter.observe(site);
        if (excursions) {
            if (auto done = recorder.observe(site)) excursions->push_back(*done);
        }
    }
    return {counter.count(), !counter.resolved()};
}

} // namespace skewcoal
