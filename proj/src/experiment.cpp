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

#include "skewcoal/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <CLI11.hpp>
#include <json.hpp>

#include "skewcoal/acceptance.hpp"
#include "skewcoal/analytic.hpp"
#include "skewcoal/coupled.hpp"
#include "skewcoal/excursion.hpp"
#include "skewcoal/ladder.hpp"
#include "skewcoal/parallel.hpp"
#include "skewcoal/report.hpp"
#include "skewcoal/stats.hpp"

namespace skewcoal {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::pair<Command, const char*> kCommandNames[] = {
    {Command::Coupled, "coupled"}, {Command::Ladder, "ladder"},           {Command::Chain, "chain"},
    {Command::Laws, "laws"},       {Command::Excursions, "excursions"}, {Command::Convergence, "convergence"},
    {Command::Verify, "verify"},
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string normalize_key(std::string key) {
    key = trim(key);
    std::replace(key.begin(), key.end(), '_', '-');
    return key;
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    const std::string s = trim(text);
    T value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument("invalid value for " + key + ": '" + text + "'");
    }
    return value;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) out.push_back(parse_number<double>(key, item));
    if (out.empty()) throw std::invalid_argument("empty list for " + key);
    return out;
}

std::string join(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + format_number(xs[i]);
    return out;
}

std::int64_t chain_length(const ExperimentConfig& c) { return c.k_max.value_or(200); }
std::int64_t ladder_cycles(const ExperimentConfig& c) { return c.k_max.value_or(1); }

ordered_json config_json(const ExperimentConfig& c) {
    ordered_json j;
    j["command"] = command_name(c.command);
    j["beta"] = c.beta;
    j["y"] = c.y;
    j["space_step"] = c.space_step;
    j["horizon_steps"] = c.horizon_steps;
    j["replicates"] = c.replicates;
    j["seed"] = c.seed;
    j["format"] = c.format == OutputFormat::Json ? "json" : "csv";
    j["k_max"] = c.command == Command::Chain ? chain_length(c) : ladder_cycles(c);
    j["thresholds"] = c.thresholds;
    j["clock_limit"] = c.clock_limit;
    j["space_steps"] = c.space_steps;
    j["epsilon"] = c.epsilon;
    return j;
}

// ---------------------------------------------------------------------------
// Output

class Output {
public:
    Output(const ExperimentConfig& config, std::ostream& log) : config_(config), log_(log) {
        std::error_code ec;
        std::filesystem::create_directories(config.out_dir, ec);
        if (ec) throw std::runtime_error("cannot create " + config.out_dir.string() + ": " + ec.message());
    }

    std::string csv_header() const { return "# " + describe(config_); }

    void write(const std::string& name, const std::string& body) const {
        const auto path = config_.out_dir / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << body;
        out.close();
        if (!out) throw std::runtime_error("write failed for " + path.string());
        log_ << "wrote " << path.string() << '\n';
    }

    /// summary.{json,csv}; verdicts go into the same JSON file or verdicts.csv.
    void write_summary(const ordered_json& summary, const std::vector<TestVerdict>* verdicts) const {
        if (config_.format == OutputFormat::Json) {
            ordered_json j;
            j["config"] = config_json(config_);
            j["summary"] = summary;
            if (verdicts) {
                ordered_json arr = ordered_json::array();
                for (const auto& v : *verdicts) {
                    arr.push_back({{"description", v.description},
                                   {"statistic", v.statistic},
                                   {"threshold", v.threshold},
                                   {"n", v.n},
                                   {"passed", v.passed}});
                }
                j["verdicts"] = arr;
            }
            write("summary.json", j.dump(2) + "\n");
            return;
        }
        std::ostringstream s;
        s << csv_header() << "\nkey,value\n";
        for (const auto& [key, value] : summary.items()) s << key << ',' << csv_value(value) << '\n';
        write("summary.csv", s.str());
        if (verdicts) {
            std::ostringstream v;
            v << csv_header() << "\ndescription,statistic,threshold,n,passed\n";
            for (const auto& t : *verdicts) {
                v << '"' << t.description << "\"," << format_number(t.statistic) << ','
                  << format_number(t.threshold) << ',' << t.n << ',' << (t.passed ? "true" : "false") << '\n';
            }
            write("verdicts.csv", v.str());
        }
    }

private:
    static std::string csv_value(const ordered_json& v) {
        if (v.is_number_float()) return format_number(v.get<double>());
        if (v.is_null()) return "NA";
        if (v.is_string()) return v.get<std::string>();
        return v.dump();
    }

    const ExperimentConfig& config_;
    std::ostream& log_;
};

void log_verdicts(std::ostream& log, const std::vector<TestVerdict>& verdicts) {
    for (const auto& v : verdicts) {
        log << (v.passed ? "  ok   " : "  FAIL ") << v.description << ": " << format_number(v.statistic)
            << " <= " << format_number(v.threshold) << " (n=" << v.n << ")\n";
    }
}

int verdict_exit(const std::vector<TestVerdict>& verdicts) {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const TestVerdict& v) { return v.passed; }) ? 0 : 2;
}

ordered_json optional_json(const std::optional<double>& x) {
    return x ? ordered_json(*x) : ordered_json(nullptr);
}

// ---------------------------------------------------------------------------
// Commands

int run_coupled(const ExperimentConfig& c, const Output& out, std::ostream& log) {
    const LatticeConfig cfg(c.space_step, c.horizon_steps);
    const SkewParams params(c.beta, c.y, cfg);
    const auto steps = map_replicates(static_cast<std::size_t>(c.replicates), c.threads, [&](std::size_t r) {
        return first_coalescence_step(params, cfg, derive_stream(c.seed, r));
    });

    std::ostringstream csv;
    csv << out.csv_header() << "\nreplicate,coalesce_time\n";
    std::vector<double> times;
    for (std::size_t r = 0; r < steps.size(); ++r) {
        std::optional<double> t;
        if (steps[r]) {
            t = cfg.time_of(*steps[r]);
            times.push_back(*t);
        }
        csv << r << ',' << format_number(t) << '\n';
    }
    out.write("coalescence.csv", csv.str());

    ordered_json s;
    s["rounded_y"] = params.rounded_y();
    s["replicates"] = steps.size();
    s["coalesced"] = times.size();
    s["coalesced_fraction"] = static_cast<double>(times.size()) / static_cast<double>(steps.size());
    s["horizon_time"] = cfg.time_of(c.horizon_steps);
    s["median_coalesce_time"] = times.empty() ? ordered_json(nullptr) : ordered_json(quantile(times, 0.5));
    s["mean_coalesce_time_given_coalesced"] = times.empty() ? ordered_json(nullptr) : ordered_json(sample_mean(times));
    out.write_summary(s, nullptr);
    log << "coalesced " << times.size() << " of " << steps.size() << " within " << c.horizon_steps << " steps\n";
    return 0;
}

int run_ladder(const ExperimentConfig& c, const Output& out, std::ostream& log) {
    const LatticeConfig cfg(c.space_step, c.horizon_steps);
    const SkewParams params(c.beta, c.y, cfg);
    const LadderTable table = collect_ladder_samples(params, cfg, c.seed, static_cast<std::size_t>(c.replicates),
                                                     static_cast<std::size_t>(ladder_cycles(c)), c.threads);
    std::ostringstream csv;
    write_ladder_csv(csv, table, out.csv_header());
    out.write("ladder.csv", csv.str());

    std::vector<TestVerdict> verdicts;
    if (c.beta != 0.0) {
        verdicts = ladder_law_verdicts(table, c.beta);
    } else {
        log << "beta = 0: the ladder laws are degenerate, no law checks\n";
    }

    ordered_json s;
    s["rounded_y"] = params.rounded_y();
    s["replicates"] = table.n_replicates;
    s["complete_cycle1"] = table.complete_cycle1;
    s["coalesced_in_cycle1"] = table.coalesced_in_cycle1;
    s["unresolved_cycle1"] = table.unresolved_cycle1;
    s["censored_before_s0"] = table.censored_before_s0;
    if (c.beta != 0.0) {
        const LawSpec law(c.beta);
        s["analytic_w_mean"] = law.w_mean();
        s["analytic_log_v_mean"] = law.log_v_mean();
        s["lattice_w_ks_floor"] = lattice_w_ks_floor(law.beta(), params.y_sites());
    }
    out.write_summary(s, &verdicts);
    log_verdicts(log, verdicts);
    return verdict_exit(verdicts);
}

int run_chain(const ExperimentConfig& c, const Output& out, std::ostream& log) {
    const LawSpec law(c.beta);
    const std::int64_t k_max = chain_length(c);
    const auto chains = map_replicates(static_cast<std::size_t>(c.replicates), c.threads, [&](std::size_t i) {
        return chain_simulate(law, c.y, derive_stream(c.seed, i), k_max, c.epsilon);
    });

    std::ostringstream csv;
    csv << out.csv_header() << "\nchain_id,k,M\n";
    std::vector<double> decays, sums, finals;
    std::size_t reached = 0;
    for (std::size_t i = 0; i < chains.size(); ++i) {
        const ChainResult& ch = chains[i];
        for (std::size_t k = 0; k < ch.m.size(); ++k) csv << i << ',' << k << ',' << format_number(ch.m[k]) << '\n';
        decays.push_back(ch.decay_estimate);
        sums.push_back(ch.sum_m);
        finals.push_back(ch.m.back());
        reached += ch.steps_to_epsilon.has_value();
    }
    out.write("chain.csv", csv.str());

    ordered_json s;
    s["chains"] = chains.size();
    s["k_max"] = k_max;
    s["mean_decay"] = sample_mean(decays);
    s["analytic_decay"] = optional_json(law.chain_drift() ? std::optional<double>(-*law.chain_drift()) : std::nullopt);
    s["mean_sum_M"] = sample_mean(sums);
    s["reached_epsilon"] = reached;
    for (const double q : {0.1, 0.5, 0.9}) {
        const std::string tag = format_number(q);
        s["sum_M_q" + tag] = quantile(sums, q);
        s["M_final_q" + tag] = quantile(finals, q);
    }
    out.write_summary(s, nullptr);
    log << "mean decay " << format_number(sample_mean(decays)) << " over " << chains.size() << " chains\n";
    return 0;
}

int run_laws(const ExperimentConfig& c, const Output& out, std::ostream& log) {
    const LawSpec law(c.beta);
    const auto n = static_cast<std::size_t>(c.replicates);

    double w_trip = 0.0;
    double v_trip = 0.0;
    for (int i = 1; i < 1000; ++i) {
        const double u = i / 1000.0;
        if (!law.w_degenerate()) w_trip = std::max(w_trip, std::abs(w_cdf(law, w_from_uniform(law, u)) - u));
        v_trip = std::max(v_trip, std::abs(v_survival(law, v_from_uniform(law, u)) - u));
    }

    UniformStream stream = derive_stream(c.seed, 0);
    std::vector<double> w(n), v(n);
    for (auto& x : w) x = sample_w(law, stream);
    for (auto& x : v) x = sample_v(law, stream);
    std::sort(w.begin(), w.end());
    std::sort(v.begin(), v.end());

    const double eps = dkw_epsilon(n, kDkwDelta);
    std::vector<TestVerdict> verdicts;
    verdicts.push_back(TestVerdict::make("round trip max |F_V(V(u)) survival - u|", v_trip, 1e-12, 999));
    if (law.w_degenerate()) {
        verdicts.push_back(TestVerdict::make("W degenerate at 0: max W", w.back(), 0.0, n));
    } else {
        verdicts.push_back(TestVerdict::make("round trip max |F_W(W(u)) - u|", w_trip, 1e-12, 999));
        verdicts.push_back(
            TestVerdict::make("KS(W)", ks_statistic(w, [&](double x) { return w_cdf(law, x); }), eps, n));
    }
    verdicts.push_back(TestVerdict::make("KS(V)", ks_statistic(v, [&](double x) { return v_cdf(law, x); }), eps, n));

    ordered_json s;
    s["samples"] = n;
    s["w_exponent"] = law.w_exponent();
    s["v_exponent"] = law.v_exponent();
    s["mean_W"] = sample_mean(w);
    s["analytic_mean_W"] = law.w_mean();
    s["mean_log_V"] = sample_mean(std::vector<double>([&] {
        std::vector<double> lv;
        for (const double x : v) lv.push_back(std::log(x));
        return lv;
    }()));
    s["analytic_mean_log_V"] = law.log_v_mean();
    out.write_summary(s, &verdicts);
    log_verdicts(log, verdicts);
    return verdict_exit(verdicts);
}

int run_excursions(const ExperimentConfig& c, const Output& out, std::ostream& log) {
    const LatticeConfig cfg(c.space_step, c.horizon_steps);
    const auto n = static_cast<std::size_t>(c.replicates);

    std::ostringstream counts_csv;
    counts_csv << out.csv_header() << "\nreplicate,threshold,sign,count,truncated\n";
    std::vector<ExcursionRecord> sample_excursions;
    std::vector<TestVerdict> verdicts;
    ordered_json s;

    for (std::size_t ti = 0; ti < c.thresholds.size(); ++ti) {
        const double thr = c.thresholds[ti];
        for (const int sign : {+1, -1}) {
            const SignFilter filter = sign > 0 ? SignFilter::Positive : SignFilter::Negative;
            const auto results = map_replicates(n, c.threads, [&](std::size_t r) {
                return walk_intensity_count(c.beta, cfg, derive_stream(c.seed, r), thr, c.clock_limit, filter);
            });
            if (ti == 0 && sign > 0) {
                walk_intensity_count(c.beta, cfg, derive_stream(c.seed, 0), thr, c.clock_limit, SignFilter::Both,
                                     &sample_excursions);
            }
            std::vector<std::int64_t> counts;
            std::size_t truncated = 0;
            for (std::size_t r = 0; r < n; ++r) {
                counts.push_back(results[r].count);
                truncated += results[r].truncated;
                counts_csv << r << ',' << format_number(thr) << ',' << (sign > 0 ? "+1" : "-1") << ','
                           << results[r].count << ',' << (results[r].truncated ? 1 : 0) << '\n';
            }
            const double lambda = c.clock_limit * (1.0 + sign * c.beta) / (2.0 * thr);
            const std::string label = std::string(sign > 0 ? "positive" : "negative") + " excursions above " +
                                      format_number(thr) + ", lambda " + format_number(lambda) + " (truncated " +
                                      std::to_string(truncated) + ")";
            if (lambda > 0.0) {
                verdicts.push_back(poisson_mean_check(counts, lambda, kSigmas, kIntensityAllowance, label));
            } else {
                const auto nonzero = std::count_if(counts.begin(), counts.end(), [](auto k) { return k != 0; });
                verdicts.push_back(TestVerdict::make(label + ": replicates with a nonzero count",
                                                     static_cast<double>(nonzero), 0.0, n));
            }
            const std::string key = (sign > 0 ? "mean_positive_" : "mean_negative_") + format_number(thr);
            s[key] = sample_mean(std::vector<double>(counts.begin(), counts.end()));
        }
    }
    out.write("counts.csv", counts_csv.str());
    std::ostringstream exc_csv;
    write_excursion_csv(exc_csv, sample_excursions, out.csv_header());
    out.write("excursions.csv", exc_csv.str());

    out.write_summary(s, &verdicts);
    log_verdicts(log, verdicts);
    return verdict_exit(verdicts);
}

int run_convergence(const ExperimentConfig& c, const Output& out, std::ostream& log) {
    const LawSpec law(c.beta);
    std::ostringstream csv;
    csv << out.csv_header() << "\nspace_step,quantity,empirical,analytic,abs_diff,n\n";
    auto row = [&](double h, const char* q, double emp, double ana, std::size_t n) {
        csv << format_number(h) << ',' << q << ',' << format_number(emp) << ',' << format_number(ana) << ','
            << format_number(std::abs(emp - ana)) << ',' << n << '\n';
    };

    for (const double h : c.space_steps) {
        const LatticeConfig cfg(h, c.horizon_steps);
        const SkewParams params(c.beta, c.y, cfg);
        const LadderTable table =
            collect_ladder_samples(params, cfg, c.seed, static_cast<std::size_t>(c.replicates), 1, c.threads);

        std::vector<double> w = pooled_w(table, 1);
        std::sort(w.begin(), w.end());
        if (!w.empty()) {
            row(h, "W_mean", sample_mean(w), law.w_mean(), w.size());
            row(h, "W_ks", ks_statistic(w, [&](double x) { return w_cdf(law, x); }), 0.0, w.size());
        }
        std::vector<double> lv;
        for (const double v : pooled_v(table, 1)) lv.push_back(std::log(v));
        if (!lv.empty()) row(h, "log_V_mean", sample_mean(lv), law.log_v_mean(), lv.size());

        const std::vector<double> pmf = lattice_w_pmf(law.beta(), params.y_sites());
        const double m = static_cast<double>(pmf.size() - 1);
        double exact_mean = 0.0;
        for (std::size_t j = 0; j < pmf.size(); ++j) exact_mean += pmf[j] * static_cast<double>(j) / m;
        row(h, "W_mean_exact_lattice", exact_mean, law.w_mean(), 0);
        row(h, "W_ks_exact_lattice", lattice_w_ks_floor(law.beta(), params.y_sites()), 0.0, 0);
        row(h, "W_atom_at_0_exact_lattice", pmf[0], 0.0, 0);

        const double thr = c.thresholds.front();
        if (thr >= 2.0 * h) {
            const auto counts = map_replicates(static_cast<std::size_t>(c.replicates), c.threads, [&](std::size_t r) {
                return static_cast<double>(walk_intensity_count(c.beta, cfg, derive_stream(c.seed, r), thr,
                                                                c.clock_limit, SignFilter::Positive)
                                               .count);
            });
            row(h, "positive_intensity", sample_mean(counts), c.clock_limit * (1.0 + c.beta) / (2.0 * thr),
                counts.size());
        }
        log << "space step " << format_number(h) << " done\n";
    }
    out.write("convergence.csv", csv.str());
    return 0;
}

int run_verify(const ExperimentConfig& c, const Output& out, std::ostream& log) {
    AcceptanceOptions options;
    options.threads = c.threads;
    options.on_result = [&](const CriterionResult& r) {
        print_criterion(log, r);
        log.flush();
    };
    const std::vector<CriterionResult> results = run_acceptance_suite(options);

    std::vector<TestVerdict> verdicts;
    ordered_json s;
    std::size_t passed = 0;
    for (const auto& r : results) {
        passed += r.passed();
        s["criterion_" + std::to_string(r.id)] = r.passed() ? "pass" : "fail";
        for (TestVerdict v : r.checks) {
            v.description = "criterion " + std::to_string(r.id) + ": " + v.description;
            verdicts.push_back(std::move(v));
        }
    }
    s["passed"] = passed;
    s["criteria"] = results.size();
    out.write_summary(s, &verdicts);
    log << passed << " of " << results.size() << " criteria passed\n";
    return passed == results.size() ? 0 : 2;
}

} // namespace

std::optional<Command> parse_command(const std::string& name) {
    for (const auto& [cmd, text] : kCommandNames) {
        if (name == text) return cmd;
    }
    return std::nullopt;
}

std::string command_name(Command c) {
    for (const auto& [cmd, text] : kCommandNames) {
        if (cmd == c) return text;
    }
    return "unknown";
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file " + path.string());
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos || trim(line.substr(0, eq)).empty()) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        }
        out[normalize_key(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

void apply_setting(ExperimentConfig& c, const std::string& raw_key, const std::string& value) {
    const std::string key = normalize_key(raw_key);
    if (key == "command") {
        const auto cmd = parse_command(trim(value));
        if (!cmd) throw std::invalid_argument("unknown command '" + value + "'");
        c.command = *cmd;
    } else if (key == "beta") {
        c.beta = parse_number<double>(key, value);
    } else if (key == "y") {
        c.y = parse_number<double>(key, value);
    } else if (key == "space-step") {
        c.space_step = parse_number<double>(key, value);
    } else if (key == "horizon" || key == "horizon-steps") {
        // Accept "1e6" as well as plain integers.
        const double h = parse_number<double>(key, value);
        if (h != std::floor(h) || h < 1 || h > 9e18) throw std::invalid_argument("invalid value for horizon: " + value);
        c.horizon_steps = static_cast<std::int64_t>(h);
    } else if (key == "replicates") {
        const double n = parse_number<double>(key, value);
        if (n != std::floor(n) || n < 1 || n > 1e12) throw std::invalid_argument("invalid value for replicates: " + value);
        c.replicates = static_cast<std::int64_t>(n);
    } else if (key == "seed") {
        c.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "threads") {
        c.threads = parse_number<unsigned>(key, value);
    } else if (key == "out-dir") {
        c.out_dir = trim(value);
    } else if (key == "format") {
        const std::string f = trim(value);
        if (f == "json") c.format = OutputFormat::Json;
        else if (f == "csv") c.format = OutputFormat::Csv;
        else throw std::invalid_argument("format must be csv or json, got '" + value + "'");
    } else if (key == "k-max") {
        c.k_max = parse_number<std::int64_t>(key, value);
    } else if (key == "thresholds" || key == "threshold") {
        c.thresholds = parse_list(key, value);
    } else if (key == "clock-limit") {
        c.clock_limit = parse_number<double>(key, value);
    } else if (key == "space-steps") {
        c.space_steps = parse_list(key, value);
    } else if (key == "epsilon") {
        c.epsilon = parse_number<double>(key, value);
    } else {
        throw std::invalid_argument("unknown setting '" + raw_key + "'");
    }
}

void validate(const ExperimentConfig& c) {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw std::invalid_argument(what);
    };
    auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
    require(std::isfinite(c.beta) && c.beta >= -1.0 && c.beta <= 1.0, "beta must lie in [-1, 1]");
    require(positive(c.y), "y must be positive");
    require(positive(c.space_step), "space-step must be positive");
    require(c.horizon_steps >= 1, "horizon must be at least 1");
    require(c.replicates >= 1, "replicates must be at least 1");
    require(c.threads >= 1, "threads must be at least 1");
    require(!c.k_max || *c.k_max >= 1, "k-max must be at least 1");
    require(!c.thresholds.empty(), "thresholds must be non-empty");
    for (const double t : c.thresholds) require(positive(t), "thresholds must be positive");
    require(positive(c.clock_limit), "clock-limit must be positive");
    require(!c.space_steps.empty(), "space-steps must be non-empty");
    for (const double h : c.space_steps) require(positive(h), "space-steps must be positive");
    require(positive(c.epsilon), "epsilon must be positive");

    switch (c.command) {
    case Command::Coupled:
    case Command::Ladder:
        require(round_to_even_sites(c.y, c.space_step) >= 2, "y rounds to a zero gap at this space-step");
        break;
    case Command::Chain:
        require(c.beta != 0.0, "chain needs beta != 0");
        require(c.epsilon < c.y, "epsilon must be below y");
        break;
    case Command::Laws:
        require(c.beta != 0.0, "laws needs beta != 0");
        require(c.replicates >= 2, "laws needs at least 2 samples");
        break;
    case Command::Excursions:
        for (const double t : c.thresholds) {
            require(t >= 2.0 * c.space_step, "thresholds must be at least 2 * space-step");
        }
        break;
    case Command::Convergence:
        require(c.beta != 0.0, "convergence needs beta != 0");
        for (const double h : c.space_steps) {
            require(round_to_even_sites(c.y, h) >= 2, "y rounds to a zero gap at space-step " + format_number(h));
        }
        break;
    case Command::Verify:
        break;
    }
}

std::string describe(const ExperimentConfig& c) {
    const ordered_json j = config_json(c);
    std::string out = "config";
    for (const auto& [key, value] : j.items()) {
        std::string text;
        if (value.is_string()) text = value.get<std::string>();
        else if (value.is_number_float()) text = format_number(value.get<double>());
        else if (value.is_array()) text = join(value.get<std::vector<double>>());
        else text = value.dump();
        out += " " + key + "=" + text;
    }
    return out;
}

int run(const ExperimentConfig& config, std::ostream& log, std::ostream& err) {
    try {
        validate(config);
        const Output out(config, log);
        switch (config.command) {
        case Command::Coupled: return run_coupled(config, out, log);
        case Command::Ladder: return run_ladder(config, out, log);
        case Command::Chain: return run_chain(config, out, log);
        case Command::Laws: return run_laws(config, out, log);
        case Command::Excursions: return run_excursions(config, out, log);
        case Command::Convergence: return run_convergence(config, out, log);
        case Command::Verify: return run_verify(config, out, log);
        }
        throw std::logic_error("unhandled command");
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& log, std::ostream& err) {
    CLI::App app{"Coupled skew random walks: ladder laws, coalescence and excursion experiments"};
    std::string command;
    std::string config_file;
    std::map<std::string, std::string> flags;

    app.add_option("command", command, "coupled | ladder | chain | laws | excursions | convergence | verify")
        ->required();
    app.add_option("--config", config_file, "key = value settings file; flags override it");

    const std::pair<const char*, const char*> options[] = {
        {"beta", "skewness in [-1, 1]"},
        {"y", "initial gap (rounded to an even number of sites)"},
        {"space-step", "lattice step h; time step is h^2"},
        {"horizon", "steps per replicate"},
        {"replicates", "replicates, chains or samples"},
        {"seed", "master seed"},
        {"threads", "worker threads (results do not depend on it)"},
        {"out-dir", "output directory"},
        {"format", "summary format: csv or json"},
        {"k-max", "ladder cycles per replicate or chain length"},
        {"thresholds", "comma-separated excursion height thresholds"},
        {"clock-limit", "local-time clock limit for excursion counts"},
        {"space-steps", "comma-separated space steps for convergence"},
        {"epsilon", "chain stopping level"},
    };
    std::vector<std::string> values(std::size(options));
    std::vector<CLI::Option*> handles;
    for (std::size_t i = 0; i < std::size(options); ++i) {
        handles.push_back(app.add_option(std::string("--") + options[i].first, values[i], options[i].second));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, e2;
        const int code = app.exit(e, o, e2);
        log << o.str();
        err << e2.str();
        return code == 0 ? 0 : 1;
    }

    ExperimentConfig config;
    try {
        apply_setting(config, "command", command);
        if (!config_file.empty()) {
            for (const auto& [key, value] : read_config_file(config_file)) flags[key] = value;
        }
        for (std::size_t i = 0; i < handles.size(); ++i) {
            if (handles[i]->count() > 0) flags[options[i].first] = values[i];
        }
        for (const auto& [key, value] : flags) apply_setting(config, key, value);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return run(config, log, err);
}

} // namespace skewcoal
