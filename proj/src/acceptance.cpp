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

#include "skewcoal/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <unistd.h>

#include "skewcoal/analytic.hpp"
#include "skewcoal/coupled.hpp"
#include "skewcoal/excursion.hpp"
#include "skewcoal/experiment.hpp"
#include "skewcoal/parallel.hpp"
#include "skewcoal/report.hpp"

namespace skewcoal {

namespace {

using SteadyClock = std::chrono::steady_clock;

// Seeds are pinned per criterion.
constexpr std::uint64_t kSeedLadderHalf = 7;
constexpr std::uint64_t kSeedLadderQuarter = 25;
constexpr std::uint64_t kSeedChain = 5005;
constexpr std::uint64_t kSeedSampler = 6006;
constexpr std::uint64_t kSeedExcursion = 7007;
constexpr std::uint64_t kSeedCoalescence = 8008;
constexpr std::uint64_t kSeedControl = 9009;
constexpr std::uint64_t kSeedProperties = 10010;

constexpr double kSpaceStep = 0.01;
// First-cycle ladder runs need a long horizon: the time to S_0 has a 1/sqrt(t)
// tail, so ~10% of replicates are still unresolved after 1e6 steps at y = 1.
// 1e8 steps (t = 1e4) leaves about 1%.
constexpr std::int64_t kLadderHorizon = 100'000'000;
constexpr std::size_t kLadderReplicates = 2000;

double elapsed_since(SteadyClock::time_point t0) {
    return std::chrono::duration<double>(SteadyClock::now() - t0).count();
}

double w_variance(const LawSpec& law) {
    const double c = law.w_exponent();
    return c / (c + 2.0) - law.w_mean() * law.w_mean();
}

std::optional<double> wv_variance(const LawSpec& law) {
    const double a = law.v_exponent();
    if (a <= 2.0) return std::nullopt;
    const double c = law.w_exponent();
    return (c / (c + 2.0)) * (a / (a - 2.0)) - 1.0;
}

TestVerdict missing(std::string what) {
    return TestVerdict::make(std::move(what) + " (sample too small)", INFINITY, 0.0, 0);
}

std::string fmt(double x) { return format_number(x); }

std::vector<double> logs_of(const std::vector<double>& xs) {
    std::vector<double> out;
    out.reserve(xs.size());
    for (const double x : xs) out.push_back(std::log(x));
    return out;
}

} // namespace

std::vector<TestVerdict> ladder_law_verdicts(const LadderTable& table, double beta, std::size_t reference_n) {
    const LawSpec law(beta);
    std::vector<TestVerdict> out;
    auto size_of = [&](std::size_t n) { return reference_n ? reference_n : n; };

    std::vector<double> w = pooled_w(table, 1);
    std::sort(w.begin(), w.end());
    if (w.size() < 2) {
        out.push_back(missing("W_1 law"));
        out.push_back(missing("W_1 mean"));
    } else {
        const std::size_t n = size_of(w.size());
        const double ks = ks_statistic(w, [&](double x) { return w_cdf(law, x); });
        out.push_back(TestVerdict::make("KS(W_1, w^" + fmt(law.w_exponent()) + ")", ks,
                                        dkw_epsilon(n, kDkwDelta) + kLadderKsAllowance, w.size()));
        const double mean = sample_mean(w);
        out.push_back(TestVerdict::make(
            "|mean(W_1) - " + fmt(law.w_mean()) + "| (mean " + fmt(mean) + ")", std::abs(mean - law.w_mean()),
            kSigmas * std::sqrt(w_variance(law) / static_cast<double>(n)) + kMeanAllowance, w.size()));
    }

    const std::vector<double> lv = logs_of(pooled_v(table, 1));
    if (lv.size() < 2) {
        out.push_back(missing("log V_1 mean"));
        out.push_back(missing("log V_1 variance"));
    } else {
        const std::size_t n = size_of(lv.size());
        const double target = law.log_v_mean();
        const double mean = sample_mean(lv);
        const double var = sample_variance(lv);
        out.push_back(TestVerdict::make("|mean(log V_1) - " + fmt(target) + "| (mean " + fmt(mean) + ")",
                                        std::abs(mean - target),
                                        kSigmas * target / std::sqrt(static_cast<double>(n)) + kMeanAllowance,
                                        lv.size()));
        out.push_back(TestVerdict::make("|var(log V_1) / " + fmt(target * target) + " - 1| (var " + fmt(var) + ")",
                                        std::abs(var / (target * target) - 1.0), kLogVarianceRelTol, lv.size()));
    }

    if (const auto var_wv = wv_variance(law)) {
        const std::vector<double> p = pooled_product(table, 1);
        if (p.size() < 2) {
            out.push_back(missing("W_1 V_1 mean"));
        } else {
            const std::size_t n = size_of(p.size());
            const double mean = sample_mean(p);
            out.push_back(TestVerdict::make("|mean(W_1 V_1) - 1| (mean " + fmt(mean) + ")", std::abs(mean - 1.0),
                                            kSigmas * std::sqrt(*var_wv / static_cast<double>(n)) + kMeanAllowance,
                                            p.size()));
        }
    }
    return out;
}

bool CriterionResult::passed() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const TestVerdict& v) { return v.passed; });
}

void print_criterion(std::ostream& out, const CriterionResult& r) {
    out << (r.passed() ? "[PASS] " : "[FAIL] ") << "criterion " << r.id << ": " << r.title << " ("
        << fmt(std::round(r.seconds * 10.0) / 10.0) << " s)\n";
    for (const TestVerdict& v : r.checks) {
        out << "         " << (v.passed ? "ok   " : "FAIL ") << v.description << ": statistic=" << fmt(v.statistic)
            << " threshold=" << fmt(v.threshold) << " n=" << v.n << '\n';
    }
}

namespace {

std::string ladder_census(const LadderTable& t) {
    std::ostringstream s;
    s << "first cycle: complete " << t.complete_cycle1 << ", coalesced " << t.coalesced_in_cycle1
      << ", unresolved " << t.unresolved_cycle1 << " (no S_0: " << t.censored_before_s0 << ") of " << t.n_replicates;
    return s.str();
}

std::vector<CriterionResult> ladder_half_criteria(unsigned threads) {
    const auto t0 = SteadyClock::now();
    const LatticeConfig cfg(kSpaceStep, kLadderHorizon);
    const SkewParams params(0.5, 1.0, cfg);
    const LadderTable table = collect_ladder_samples(params, cfg, kSeedLadderHalf, kLadderReplicates, 1, threads);
    const std::vector<TestVerdict> v = ladder_law_verdicts(table, 0.5);
    const double secs = elapsed_since(t0);
    const std::string census = " [" + ladder_census(table) + "]";

    std::vector<CriterionResult> out(3);
    out[0] = {1, "W-law at path level, beta=0.5, y=1" + census, {v[0]}, secs};
    out[1] = {2, "W mean, beta=0.5, y=1", {v[1]}, 0.0};
    out[2] = {3, "log V law, beta=0.5, y=1", {v[2], v[3]}, 0.0};
    return out;
}

CriterionResult martingale_product_criterion(unsigned threads) {
    const auto t0 = SteadyClock::now();
    const LatticeConfig cfg(kSpaceStep, kLadderHorizon);
    const SkewParams params(0.25, 1.0, cfg);
    const LadderTable table = collect_ladder_samples(params, cfg, kSeedLadderQuarter, kLadderReplicates, 1, threads);
    const std::vector<TestVerdict> v = ladder_law_verdicts(table, 0.25);
    return {4, "martingale product E[W_1 V_1] = 1, beta=0.25 [" + ladder_census(table) + "]", {v.back()},
            elapsed_since(t0)};
}

CriterionResult chain_decay_criterion(unsigned threads) {
    const auto t0 = SteadyClock::now();
    const LawSpec law(0.5);
    constexpr std::size_t kChains = 10'000;
    constexpr std::int64_t kCycles = 200;
    const auto decays = map_replicates(kChains, threads, [&](std::size_t i) {
        return chain_simulate(law, 1.0, derive_stream(kSeedChain, i), kCycles, 1e-300).decay_estimate;
    });
    const double secs = elapsed_since(t0);
    const double mean = sample_mean(decays);
    const double target = -*law.chain_drift();
    return {5,
            "chain oracle decay, beta=0.5, 10^4 chains, K=200",
            {TestVerdict::make("|mean decay - (" + fmt(target) + ")| (mean " + fmt(mean) + ")",
                               std::abs(mean - target), 0.005, kChains),
             TestVerdict::make("runtime seconds", secs, 5.0, kChains)},
            secs};
}

CriterionResult sampler_ks_criterion() {
    const auto t0 = SteadyClock::now();
    constexpr std::size_t kSamples = 100'000;
    const double threshold = dkw_epsilon(kSamples, kDkwDelta);
    CriterionResult r{6, "pure-sampler KS for W and V", {}, 0.0};
    std::uint64_t lane = 0;
    for (const double beta : {0.25, 0.5, 0.75}) {
        const LawSpec law(beta);
        UniformStream s = derive_stream(kSeedSampler, lane++);
        std::vector<double> w(kSamples);
        std::vector<double> v(kSamples);
        for (auto& x : w) x = sample_w(law, s);
        for (auto& x : v) x = sample_v(law, s);
        std::sort(w.begin(), w.end());
        std::sort(v.begin(), v.end());
        r.checks.push_back(TestVerdict::make("KS(W) beta=" + fmt(beta),
                                             ks_statistic(w, [&](double x) { return w_cdf(law, x); }), threshold,
                                             kSamples));
        r.checks.push_back(TestVerdict::make("KS(V) beta=" + fmt(beta),
                                             ks_statistic(v, [&](double x) { return v_cdf(law, x); }), threshold,
                                             kSamples));
    }
    r.seconds = elapsed_since(t0);
    return r;
}

CriterionResult intensity_criterion(unsigned threads) {
    const auto t0 = SteadyClock::now();
    constexpr std::size_t kReplicates = 1000;
    constexpr double kThreshold = 0.1;
    constexpr double kClock = 1.0;
    // Horizon only caps pathological excursions; runs stop once the clock is used up.
    const LatticeConfig cfg(kSpaceStep, 100'000'000);
    CriterionResult r{7, "excursion intensities, clock 1, threshold 0.1", {}, 0.0};

    struct Case {
        double beta;
        SignFilter sign;
        double lambda;
        const char* label;
    };
    const Case cases[] = {
        {0.0, SignFilter::Positive, kClock / (2.0 * kThreshold), "beta=0 positive, lambda=1/(2h)"},
        {0.5, SignFilter::Negative, kClock * (1.0 - 0.5) / (2.0 * kThreshold), "beta=0.5 negative, lambda=(1-b)/(2h)"},
    };
    std::uint64_t offset = 0;
    for (const Case& c : cases) {
        const auto results = map_replicates(kReplicates, threads, [&](std::size_t i) {
            return walk_intensity_count(c.beta, cfg, derive_stream(kSeedExcursion + offset, i), kThreshold, kClock,
                                        c.sign);
        });
        ++offset;
        std::vector<std::int64_t> counts;
        std::size_t truncated = 0;
        for (const auto& res : results) {
            counts.push_back(res.count);
            truncated += res.truncated;
        }
        r.checks.push_back(poisson_mean_check(counts, c.lambda, kSigmas, kIntensityAllowance,
                                              std::string("|mean count - lambda|, ") + c.label +
                                                  " (truncated " + std::to_string(truncated) + ")"));
    }
    r.seconds = elapsed_since(t0);
    return r;
}

CriterionResult coalescence_criterion(unsigned threads) {
    const auto t0 = SteadyClock::now();
    constexpr std::size_t kReplicates = 500;
    const std::int64_t checkpoints[] = {100'000, 1'000'000, 2'000'000};
    const LatticeConfig cfg(kSpaceStep, checkpoints[2]);
    const SkewParams params(0.5, 0.5, cfg);
    const auto steps = map_replicates(kReplicates, threads, [&](std::size_t i) {
        return first_coalescence_step(params, cfg, derive_stream(kSeedCoalescence, i));
    });

    std::vector<double> fractions;
    for (const std::int64_t cp : checkpoints) {
        const auto c = std::count_if(steps.begin(), steps.end(), [&](const auto& s) { return s && *s <= cp; });
        fractions.push_back(static_cast<double>(c) / kReplicates);
    }
    int violations = 0;
    for (std::size_t i = 1; i < fractions.size(); ++i) violations += fractions[i] < fractions[i - 1];

    std::string by_checkpoint;
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        by_checkpoint += (i ? ", " : "") + fmt(static_cast<double>(checkpoints[i])) + ": " + fmt(fractions[i]);
    }
    return {8,
            "coalescence, beta=0.5, y=0.5, 500 replicates",
            {TestVerdict::make("non-coalesced fraction at 2e6 steps (coalesced " + fmt(fractions.back()) + ")",
                               1.0 - fractions.back(), 0.05, kReplicates),
             TestVerdict::make("checkpoint monotonicity violations (" + by_checkpoint + ")", violations, 0.0,
                               fractions.size())},
            elapsed_since(t0)};
}

CriterionResult control_criterion() {
    const auto t0 = SteadyClock::now();
    const LatticeConfig cfg(kSpaceStep, 100'000);
    const SkewParams params(0.0, 1.0, cfg);
    std::int64_t max_dev = 0;
    int coalescences = 0;
    for (std::uint64_t i = 0; i < 10; ++i) {
        const CoupledPath path = simulate_coupled(params, cfg, derive_stream(kSeedControl, i), false);
        for (const std::int64_t g : gap_sites(path)) max_dev = std::max<std::int64_t>(max_dev, std::abs(g - params.y_sites()));
        coalescences += path.coalesce_step.has_value();
    }
    return {9,
            "beta=0 control, 10 replicates, 1e5 steps",
            {TestVerdict::make("max |gap - y| in sites", static_cast<double>(max_dev), 0.0, 10),
             TestVerdict::make("coalescences", coalescences, 0.0, 10)},
            elapsed_since(t0)};
}

bool files_identical(const std::filesystem::path& a, const std::filesystem::path& b) {
    std::ifstream fa(a, std::ios::binary);
    std::ifstream fb(b, std::ios::binary);
    if (!fa || !fb) return false;
    const std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    const std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    return sa == sb;
}

int thread_determinism_mismatches() {
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / ("skewcoal-determinism-" + std::to_string(::getpid()));
    int mismatches = 0;
    std::ostringstream sink;
    for (const Command cmd : {Command::Ladder, Command::Coupled, Command::Excursions}) {
        ExperimentConfig base;
        base.command = cmd;
        base.beta = 0.5;
        base.y = 1.0;
        base.space_step = 0.05;
        base.horizon_steps = 200'000;
        base.replicates = 200;
        base.seed = kSeedProperties;
        base.k_max = 3;
        ExperimentConfig one = base;
        ExperimentConfig many = base;
        one.threads = 1;
        many.threads = 8;
        one.out_dir = root / (command_name(cmd) + "-1");
        many.out_dir = root / (command_name(cmd) + "-8");
        const int rc1 = run(one, sink, sink);
        const int rc8 = run(many, sink, sink);
        if (rc1 == 1 || rc8 == 1 || rc1 != rc8) {
            ++mismatches;
            continue;
        }
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(one.out_dir)) files.push_back(e.path().filename());
        if (files.empty()) ++mismatches;
        for (const auto& f : files) mismatches += !files_identical(one.out_dir / f, many.out_dir / f);
    }
    std::error_code ec;
    fs::remove_all(root, ec);
    return mismatches;
}

CriterionResult property_criterion() {
    const auto t0 = SteadyClock::now();
    constexpr int kPaths = 100;
    constexpr std::int64_t kSteps = 20'000;
    const LatticeConfig cfg(kSpaceStep, kSteps);

    std::int64_t identity_error = 0;
    int monotonicity_failures = 0;
    int flow_violations = 0;
    for (int i = 0; i < kPaths; ++i) {
        UniformStream setup = UniformStream(kSeedProperties, static_cast<std::uint64_t>(i), 7);
        const double beta = 1.0 - setup.next_uniform();  // (0, 1]
        const std::int64_t y1 = 2 * (1 + static_cast<std::int64_t>(setup.next_uniform() * 20));
        const std::int64_t y2 = y1 + 2 * static_cast<std::int64_t>(setup.next_uniform() * 10);
        const UniformStream stream = derive_stream(kSeedProperties, static_cast<std::uint64_t>(i));

        const CoupledPath p1 = simulate_coupled(SkewParams::from_sites(beta, y1, cfg), cfg, stream, false);
        const CoupledPath p2 = simulate_coupled(SkewParams::from_sites(beta, y2, cfg), cfg, stream, false);

        const LocalTimeSeries lt = local_time_series(p1);
        const std::vector<std::int64_t> gap = gap_sites(p1);
        for (std::size_t n = 0; n < gap.size(); ++n) {
            identity_error = std::max<std::int64_t>(
                identity_error, std::abs(lt.hat_ly_sites[n] - lt.hat_l0_sites[n] - gap[n]));
        }
        monotonicity_failures += !check_segment_monotonicity(p1, extract_ladder(p1));
        for (std::size_t n = 0; n < p1.upper_sites.size(); ++n) {
            flow_violations += p1.upper_sites[n] > p2.upper_sites[n];
        }
    }

    int flip_mismatches = 0;
    for (std::uint64_t i = 0; i < 20; ++i) {
        const UniformStream s = derive_stream(kSeedProperties + 1, i);
        const std::vector<std::int64_t> walk = simulate_skew_walk(0.0, 0, cfg, s);
        const std::vector<std::int64_t> same = flip_construct(cfg, 0.0, s);
        const std::vector<std::int64_t> reflected = flip_construct(cfg, 1.0, s);
        flip_mismatches += same != walk;
        for (std::size_t n = 0; n < walk.size(); ++n) {
            if (reflected[n] != std::abs(walk[n])) {
                ++flip_mismatches;
                break;
            }
        }
    }

    const int determinism = thread_determinism_mismatches();
    return {10,
            "exact identities and properties",
            {TestVerdict::make("max |(hat_ly - hat_l0) - D| in sites over 100 paths",
                               static_cast<double>(identity_error), 0.0, kPaths),
             TestVerdict::make("segment monotonicity failures over 100 paths", monotonicity_failures, 0.0, kPaths),
             TestVerdict::make("monotone-flow violations over 100 path pairs", flow_violations, 0.0, kPaths),
             TestVerdict::make("flip_construct mismatches at beta in {0,1} over 20 streams", flip_mismatches, 0.0,
                               20),
             TestVerdict::make("files differing between --threads 1 and 8", determinism, 0.0, 3)},
            elapsed_since(t0)};
}

} // namespace

std::vector<CriterionResult> run_acceptance_suite(const AcceptanceOptions& options) {
    std::vector<CriterionResult> all;
    auto add = [&](CriterionResult r) {
        if (options.on_result) options.on_result(r);
        all.push_back(std::move(r));
    };
    for (auto& r : ladder_half_criteria(options.threads)) add(std::move(r));
    add(martingale_product_criterion(options.threads));
    add(chain_decay_criterion(options.threads));
    add(sampler_ks_criterion());
    add(intensity_criterion(options.threads));
    add(coalescence_criterion(options.threads));
    add(control_criterion());
    add(property_criterion());
    return all;
}

} // namespace skewcoal
