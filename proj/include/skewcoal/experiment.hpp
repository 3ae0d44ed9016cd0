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
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace skewcoal {

enum class Command { Coupled, Ladder, Chain, Laws, Excursions, Convergence, Verify };
enum class OutputFormat { Csv, Json };

std::optional<Command> parse_command(const std::string& name);
std::string command_name(Command c);

/// Resolved settings of one run. Tabular outputs are always CSV; `format`
/// selects the summary/verdict file type.
struct ExperimentConfig {
    Command command = Command::Verify;
    double beta = 0.5;
    double y = 1.0;
    double space_step = 0.01;
    std::int64_t horizon_steps = 1'000'000;
    std::int64_t replicates = 1000;
    std::uint64_t seed = 20261015;
    unsigned threads = 1;
    std::filesystem::path out_dir = ".";
    OutputFormat format = OutputFormat::Json;

    /// Ladder cycles per replicate (default 1) or chain length (default 200).
    std::optional<std::int64_t> k_max;
    std::vector<double> thresholds{0.1};
    double clock_limit = 1.0;
    std::vector<double> space_steps{0.04, 0.02, 0.01};
    double epsilon = 1e-300;
};

/// Parses "key = value" lines; '#' starts a comment. Keys are normalized to
/// dashes ("space_step" == "space-step"). Throws std::runtime_error on
/// unreadable files or malformed lines.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Applies one key/value setting. Throws std::invalid_argument on unknown
/// keys or unparsable values.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Throws std::invalid_argument when a field lies outside its domain.
void validate(const ExperimentConfig& config);

/// Reproducibility header: every setting that influences the output, in a
/// fixed order. Thread count and output directory are scheduling/location
/// only and are left out so outputs stay byte-identical across them.
std::string describe(const ExperimentConfig& config);

/// Runs one command and writes its files into config.out_dir.
/// Exit codes: 0 success, 2 some verdict failed, 1 runtime/config error.
int run(const ExperimentConfig& config, std::ostream& log, std::ostream& err);

/// Flag parsing (--beta, --y, --space-step, --horizon, --replicates, --seed,
/// --threads, --out-dir, --format, --config, ...) followed by run().
int run_cli(int argc, const char* const* argv, std::ostream& log, std::ostream& err);

} // namespace skewcoal
