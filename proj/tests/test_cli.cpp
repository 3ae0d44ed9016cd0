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

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <unistd.h>

#include "skewcoal/experiment.hpp"
#include "skewcoal/report.hpp"

namespace skewcoal {
namespace {

namespace fs = std::filesystem;

class TempDir {
public:
    explicit TempDir(const std::string& tag)
        : path_(fs::temp_directory_path() / ("skewcoal-test-" + tag + "-" + std::to_string(::getpid()))) {
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> lines(const fs::path& p) {
    std::istringstream in(slurp(p));
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

int cli(std::vector<std::string> args, std::string* err_text = nullptr) {
    args.insert(args.begin(), "skewcoal");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream log, err;
    const int rc = run_cli(static_cast<int>(argv.size()), argv.data(), log, err);
    if (err_text) *err_text = err.str();
    return rc;
}

TEST(Commands, NamesRoundTrip) {
    for (const char* name : {"coupled", "ladder", "chain", "laws", "excursions", "convergence", "verify"}) {
        const auto c = parse_command(name);
        ASSERT_TRUE(c);
        EXPECT_EQ(command_name(*c), name);
    }
    EXPECT_FALSE(parse_command("plot"));
}

TEST(Settings, ApplyAndValidate) {
    ExperimentConfig c;
    apply_setting(c, "beta", "-0.25");
    apply_setting(c, "space_step", "0.02");
    apply_setting(c, "horizon", "1e6");
    apply_setting(c, "thresholds", "0.1, 0.2");
    apply_setting(c, "format", "csv");
    apply_setting(c, "seed", "18446744073709551615");
    EXPECT_EQ(c.beta, -0.25);
    EXPECT_EQ(c.space_step, 0.02);
    EXPECT_EQ(c.horizon_steps, 1'000'000);
    EXPECT_EQ(c.thresholds, (std::vector<double>{0.1, 0.2}));
    EXPECT_EQ(c.format, OutputFormat::Csv);
    EXPECT_EQ(c.seed, 18446744073709551615ULL);
    EXPECT_THROW(apply_setting(c, "colour", "red"), std::invalid_argument);
    EXPECT_THROW(apply_setting(c, "beta", "half"), std::invalid_argument);
    EXPECT_THROW(apply_setting(c, "horizon", "2.5"), std::invalid_argument);
    EXPECT_THROW(apply_setting(c, "format", "xml"), std::invalid_argument);

    ExperimentConfig bad;
    bad.beta = 1.5;
    EXPECT_THROW(validate(bad), std::invalid_argument);
    bad = {};
    bad.command = Command::Excursions;
    bad.thresholds = {0.01};
    EXPECT_THROW(validate(bad), std::invalid_argument);
    bad = {};
    bad.command = Command::Laws;
    bad.beta = 0.0;
    EXPECT_THROW(validate(bad), std::invalid_argument);
    EXPECT_NO_THROW(validate(ExperimentConfig{}));
}

TEST(Settings, DescribeOmitsSchedulingFields) {
    ExperimentConfig a;
    ExperimentConfig b;
    b.threads = 8;
    b.out_dir = "/elsewhere";
    EXPECT_EQ(describe(a), describe(b));
    b.seed = 1;
    EXPECT_NE(describe(a), describe(b));
    EXPECT_NE(describe(a).find("seed=20261015"), std::string::npos);
}

TEST(ConfigFile, ParsesAndFlagsOverride) {
    TempDir dir("config");
    const fs::path file = dir.path() / "run.conf";
    std::ofstream(file) << "# coupled run\nbeta = 0.5\nreplicates=4   # few\nspace_step = 0.05\n\nseed = 3\n";
    const auto kv = read_config_file(file);
    EXPECT_EQ(kv.at("beta"), "0.5");
    EXPECT_EQ(kv.at("replicates"), "4");
    EXPECT_EQ(kv.at("space-step"), "0.05");

    const fs::path out = dir.path() / "out";
    ASSERT_EQ(cli({"coupled", "--config", file.string(), "--beta", "0", "--out-dir", out.string()}), 0);
    const auto rows = lines(out / "coalescence.csv");
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_NE(rows[0].find("beta=0 "), std::string::npos);
    EXPECT_NE(rows[0].find("replicates=4"), std::string::npos);
    EXPECT_NE(rows[0].find("space_step=0.05"), std::string::npos);

    std::ofstream(dir.path() / "broken.conf") << "beta 0.5\n";
    EXPECT_THROW(read_config_file(dir.path() / "broken.conf"), std::runtime_error);
    EXPECT_THROW(read_config_file(dir.path() / "missing.conf"), std::runtime_error);
}

TEST(Coupled, ZeroBetaWritesNaRows) {
    TempDir dir("coupled");
    ASSERT_EQ(cli({"coupled", "--beta", "0", "--replicates", "10", "--horizon", "10000", "--out-dir",
                   dir.path().string()}),
              0);
    const auto rows = lines(dir.path() / "coalescence.csv");
    ASSERT_EQ(rows.size(), 12u);
    EXPECT_EQ(rows[0].rfind("# config command=coupled", 0), 0u);
    EXPECT_EQ(rows[1], "replicate,coalesce_time");
    for (int r = 0; r < 10; ++r) EXPECT_EQ(rows[2 + r], std::to_string(r) + ",NA");
    const auto summary = nlohmann::json::parse(slurp(dir.path() / "summary.json"));
    EXPECT_EQ(summary["config"]["command"], "coupled");
    EXPECT_EQ(summary["summary"]["coalesced"], 0);
}

TEST(Ladder, OutputsAreBitIdenticalAcrossRunsAndThreads) {
    TempDir dir("ladder");
    const std::vector<std::string> base{"ladder",     "--beta", "0.5",   "--y",         "1",
                                        "--space-step", "0.01", "--replicates", "2000", "--seed", "7"};
    auto with = [&](const std::string& threads, const std::string& sub) {
        auto args = base;
        args.insert(args.end(), {"--threads", threads, "--out-dir", (dir.path() / sub).string()});
        return args;
    };
    const int rc1 = cli(with("1", "a"));
    const int rc2 = cli(with("1", "b"));
    const int rc3 = cli(with("4", "c"));
    EXPECT_NE(rc1, 1);
    EXPECT_EQ(rc1, rc2);
    EXPECT_EQ(rc1, rc3);
    for (const char* f : {"ladder.csv", "summary.json"}) {
        const std::string a = slurp(dir.path() / "a" / f);
        ASSERT_FALSE(a.empty());
        EXPECT_EQ(a, slurp(dir.path() / "b" / f)) << f;
        EXPECT_EQ(a, slurp(dir.path() / "c" / f)) << f;
    }
    const auto rows = lines(dir.path() / "a" / "ladder.csv");
    EXPECT_EQ(rows[0][0], '#');
    EXPECT_EQ(rows[1], kLadderCsvHeader);
}

TEST(Ladder, CoarseLatticeFailsLawCheckWithExitTwo) {
    TempDir dir("coarse");
    EXPECT_EQ(cli({"ladder", "--space-step", "0.1", "--replicates", "1000", "--horizon", "1000000", "--format", "csv",
                   "--out-dir", dir.path().string()}),
              2);
    const auto verdicts = lines(dir.path() / "verdicts.csv");
    ASSERT_GE(verdicts.size(), 3u);
    EXPECT_EQ(verdicts[0][0], '#');
    EXPECT_EQ(verdicts[1], "description,statistic,threshold,n,passed");
    EXPECT_NE(verdicts[2].find("false"), std::string::npos);
    EXPECT_EQ(lines(dir.path() / "summary.csv")[1], "key,value");
}

TEST(Chain, WritesTableAndSummary) {
    TempDir dir("chain");
    ASSERT_EQ(cli({"chain", "--replicates", "20", "--k-max", "5", "--out-dir", dir.path().string()}), 0);
    const auto rows = lines(dir.path() / "chain.csv");
    ASSERT_EQ(rows.size(), 2u + 20u * 6u);
    EXPECT_EQ(rows[1], "chain_id,k,M");
    EXPECT_EQ(rows[2], "0,0,1");
    const auto s = nlohmann::json::parse(slurp(dir.path() / "summary.json"));
    EXPECT_DOUBLE_EQ(s["summary"]["analytic_decay"].get<double>(), -4.0 / 3.0);
    EXPECT_TRUE(s["summary"].contains("mean_sum_M"));
    EXPECT_TRUE(s["summary"].contains("sum_M_q0.5"));
}

TEST(Laws, PassesForCorrectSamplers) {
    TempDir dir("laws");
    EXPECT_EQ(cli({"laws", "--beta", "0.5", "--replicates", "100000", "--out-dir", dir.path().string()}), 0);
    const auto s = nlohmann::json::parse(slurp(dir.path() / "summary.json"));
    ASSERT_TRUE(s["verdicts"].is_array());
    for (const auto& v : s["verdicts"]) {
        EXPECT_TRUE(v["passed"].get<bool>());
        for (const char* key : {"description", "statistic", "threshold", "n"}) EXPECT_TRUE(v.contains(key));
    }
    EXPECT_EQ(cli({"laws", "--beta", "1", "--replicates", "1000", "--out-dir", dir.path().string()}), 0);
}

TEST(Excursions, WritesCountsAndExcursionTable) {
    TempDir dir("exc");
    const int rc = cli({"excursions", "--beta", "1", "--space-step", "0.05", "--replicates", "50", "--out-dir",
                        dir.path().string()});
    EXPECT_NE(rc, 1);
    const auto ex = lines(dir.path() / "excursions.csv");
    ASSERT_GE(ex.size(), 2u);
    EXPECT_EQ(ex[1], kExcursionCsvHeader);
    for (std::size_t i = 2; i < ex.size(); ++i) EXPECT_NE(ex[i].find(",+1,"), std::string::npos);
    const auto counts = lines(dir.path() / "counts.csv");
    EXPECT_EQ(counts[1], "replicate,threshold,sign,count,truncated");
    EXPECT_EQ(counts.size(), 2u + 2u * 50u);
    const auto s = nlohmann::json::parse(slurp(dir.path() / "summary.json"));
    EXPECT_EQ(s["summary"]["mean_negative_0.1"].get<double>(), 0.0);
}

TEST(Convergence, WritesBiasTable) {
    TempDir dir("conv");
    ASSERT_EQ(cli({"convergence", "--space-steps", "0.1,0.05", "--replicates", "50", "--horizon", "100000",
                   "--out-dir", dir.path().string()}),
              0);
    const auto rows = lines(dir.path() / "convergence.csv");
    EXPECT_EQ(rows[1], "space_step,quantity,empirical,analytic,abs_diff,n");
    bool saw_floor = false;
    for (const auto& r : rows) saw_floor |= r.find("0.05,W_ks_exact_lattice,") == 0;
    EXPECT_TRUE(saw_floor);
}

TEST(Errors, ExitOneWithMessage) {
    std::string err;
    EXPECT_EQ(cli({"plot"}, &err), 1);
    EXPECT_NE(err.find("unknown command"), std::string::npos);
    EXPECT_EQ(cli({"coupled", "--beta", "2"}, &err), 1);
    EXPECT_NE(err.find("beta"), std::string::npos);
    EXPECT_EQ(cli({"coupled", "--replicates", "0"}, &err), 1);
    EXPECT_EQ(cli({"coupled", "--space-step", "-1"}, &err), 1);
    EXPECT_EQ(cli({"coupled", "--out-dir", "/proc/skewcoal-not-writable"}, &err), 1);
    EXPECT_FALSE(err.empty());
    EXPECT_EQ(cli({"coupled", "--bogus-flag", "1"}, &err), 1);
    EXPECT_EQ(cli({}, &err), 1);
}

TEST(Report, NumberFormatting) {
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(1e6), "1e+06");
    EXPECT_EQ(format_number(std::optional<double>{}), "NA");
    EXPECT_EQ(format_number(NAN), "NaN");
}

} // namespace
} // namespace skewcoal
