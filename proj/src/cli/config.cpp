#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>

#include "npf/cli.hpp"

namespace npf::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

template <class T>
T parse_positive(std::string_view key, std::string_view value) {
    T out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size() || !(out > T{}))
        throw ConfigError(std::string(key) + ": expected a positive number, got '" + std::string(value) + "'");
    return out;
}

struct KeyInfo {
    const char* key;
    const char* env;
};

constexpr KeyInfo kKeys[] = {
    {"cache_dir", "NPF_CACHE_DIR"},
    {"factor_budget_seconds", "NPF_FACTOR_BUDGET_SECONDS"},
    {"trial_bound", "NPF_TRIAL_BOUND"},
    {"precision_ceiling", "NPF_PRECISION_CEILING"},
    {"output_format", "NPF_OUTPUT_FORMAT"},
    {"threads", "NPF_THREADS"},
};

template <class T>
void overlay(T& field, const std::optional<T>& a, const std::optional<T>& b, const std::optional<T>& c) {
    if (a) field = *a;
    else if (b) field = *b;
    else if (c) field = *c;
}

}  // namespace

std::string_view to_string(OutputFormat f) {
    switch (f) {
        case OutputFormat::csv: return "csv";
        case OutputFormat::json: return "json";
        case OutputFormat::markdown: return "markdown";
    }
    return "?";
}

OutputFormat parse_output_format(std::string_view s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    if (s == "markdown" || s == "md") return OutputFormat::markdown;
    throw ConfigError("output_format: expected csv, json or markdown, got '" + std::string(s) + "'");
}

npstats::FactorBudget RunConfig::budget() const {
    npstats::FactorBudget b;
    b.trial_bound = trial_bound;
    b.seconds = factor_budget_seconds;
    return b;
}

void set_config_key(ConfigLayer& layer, std::string_view key, std::string_view value) {
    if (key == "cache_dir") {
        if (value.empty()) throw ConfigError("cache_dir: empty path");
        layer.cache_dir = std::filesystem::path(std::string(value));
    } else if (key == "factor_budget_seconds") {
        layer.factor_budget_seconds = parse_positive<double>(key, value);
    } else if (key == "trial_bound") {
        layer.trial_bound = parse_positive<std::uint32_t>(key, value);
    } else if (key == "precision_ceiling") {
        layer.precision_ceiling = parse_positive<std::size_t>(key, value);
    } else if (key == "output_format") {
        layer.output_format = parse_output_format(value);
    } else if (key == "threads") {
        layer.threads = value == "auto" ? 0u : parse_positive<unsigned>(key, value);
    } else {
        throw ConfigError("unknown configuration key '" + std::string(key) + "'");
    }
}

ConfigLayer parse_config_text(std::istream& in) {
    ConfigLayer layer;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
        try {
            set_config_key(layer, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return layer;
}

ConfigLayer load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    return parse_config_text(in);
}

EnvLookup process_environment() {
    return [](const std::string& name) -> std::optional<std::string> {
        if (const char* v = std::getenv(name.c_str())) return std::string(v);
        return std::nullopt;
    };
}

ConfigLayer environment_layer(const EnvLookup& env) {
    ConfigLayer layer;
    for (const auto& k : kKeys) {
        if (auto v = env(k.env)) {
            try {
                set_config_key(layer, k.key, trim(*v));
            } catch (const ConfigError& e) {
                throw ConfigError(std::string(k.env) + ": " + e.what());
            }
        }
    }
    return layer;
}

RunConfig resolve_config(const ConfigLayer& flags, const ConfigLayer& env, const ConfigLayer& file) {
    RunConfig cfg;
    overlay(cfg.cache_dir, flags.cache_dir, env.cache_dir, file.cache_dir);
    overlay(cfg.factor_budget_seconds, flags.factor_budget_seconds, env.factor_budget_seconds,
            file.factor_budget_seconds);
    overlay(cfg.trial_bound, flags.trial_bound, env.trial_bound, file.trial_bound);
    overlay(cfg.precision_ceiling, flags.precision_ceiling, env.precision_ceiling, file.precision_ceiling);
    if (flags.output_format) cfg.output_format = flags.output_format;
    else if (env.output_format) cfg.output_format = env.output_format;
    else if (file.output_format) cfg.output_format = file.output_format;
    overlay(cfg.threads, flags.threads, env.threads, file.threads);
    return cfg;
}

}  // namespace npf::cli
