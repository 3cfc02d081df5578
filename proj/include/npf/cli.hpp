#pragma once

// The `npf` command line: run configuration, subcommand dispatch and the
// golden ω = 4 table for Δ.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "npf/npstats.hpp"

namespace npf::cli {

enum class OutputFormat { csv, json, markdown };

std::string_view to_string(OutputFormat f);
OutputFormat parse_output_format(std::string_view s);

/// Bad configuration value or unknown key; reported as a usage error (exit 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::filesystem::path cache_dir = ".npf-cache";
    double factor_budget_seconds = 10.0;
    std::uint32_t trial_bound = 1'000'000;
    std::size_t precision_ceiling = 100001;
    /// Unset means each subcommand picks its natural format.
    std::optional<OutputFormat> output_format;
    unsigned threads = 1;  // 0 = auto

    npstats::FactorBudget budget() const;
};

/// Sparse view of RunConfig as read from one source; unset fields fall through.
struct ConfigLayer {
    std::optional<std::filesystem::path> cache_dir;
    std::optional<double> factor_budget_seconds;
    std::optional<std::uint32_t> trial_bound;
    std::optional<std::size_t> precision_ceiling;
    std::optional<OutputFormat> output_format;
    std::optional<unsigned> threads;
};

/// Applies one `key=value` setting; throws ConfigError on unknown keys or bad values.
void set_config_key(ConfigLayer& layer, std::string_view key, std::string_view value);

/// Flat `key=value` text; `#` comments and blank lines ignored.
ConfigLayer parse_config_text(std::istream& in);
ConfigLayer load_config_file(const std::filesystem::path& path);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
EnvLookup process_environment();

/// Reads NPF_CACHE_DIR, NPF_FACTOR_BUDGET_SECONDS, NPF_TRIAL_BOUND,
/// NPF_PRECISION_CEILING, NPF_OUTPUT_FORMAT and NPF_THREADS.
ConfigLayer environment_layer(const EnvLookup& env);

/// flag > environment > file > default.
RunConfig resolve_config(const ConfigLayer& flags, const ConfigLayer& env, const ConfigLayer& file);

/// Runs one command line (argv[0] is the program name). Data goes to `out`,
/// diagnostics to `err`. Returns 0 on success, 1 on a failed check or
/// computation, 2 on a usage error.
int dispatch(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err,
             const EnvLookup& env = process_environment());

// Golden ω(N_p(Δ)) = 4 table for p ≤ 16000.
std::string_view table71_expected();
std::string render_table71(const std::vector<npstats::NpRecord>& records);
/// Line-level differences as `-expected` / `+actual`; empty when identical.
std::vector<std::string> table_diff(std::string_view expected, std::string_view actual);

}  // namespace npf::cli
