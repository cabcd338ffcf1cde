#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace volrelax::cli {

enum class Command { analyze, omori, synth, pattern, events };

/// Everything that shapes a run. Serialized to `config.echo` as flat
/// `key = value` lines that `--config` reads back.
struct RunConfig {
    std::string input;
    std::string cadence;           // empty = take it from the data
    int slots_per_day = 0;         // 0 = derive from timestamps
    std::vector<double> thresholds{2, 4, 6, 8};
    bool intraday_removal = true;
    bool drop_overnight = false;
    std::string labels;
    int max_lag = 0;               // 0 = 1000 intraday, 100 daily
    int fit_min = 5;
    int fit_max = 0;               // 0 = max lag
    std::string tau = "free";
    int tail_min = 0;              // 0 = no tail-slope rows
    int tail_max = 0;
    std::size_t bootstrap = 0;
    std::uint64_t seed = 1;
    std::string surrogate = "none";
    std::vector<std::string> split{"all", "sign"};
    std::size_t min_separation = 0;
    std::string out = "out";
    // omori
    double main_threshold = 12.0;
    std::vector<double> z1{2, 3, 4, 5};
};

struct SynthConfig {
    std::string mode = "planted";  // iid | planted | intraday
    std::string base = "planted";  // base series for intraday mode
    std::size_t n = 100000;
    double sigma0 = 1e-3;
    std::uint64_t seed = 1;
    double shock_rate = 50.0;
    double boost = 3.0;
    double p = 0.3;
    double tau = 0.0;
    double shock_magnitude = 30.0;
    double boost_before = -1.0;
    double p_before = -1.0;
    std::size_t kernel_cutoff = 2000;
    std::string cadence = "daily";
    int slots_per_day = 48;
    std::vector<double> factors;
    std::string out = "synth.csv";
};

struct Invocation {
    Command command = Command::analyze;
    RunConfig run;
    SynthConfig synth;
    bool help = false;     // help or version was printed
    int exit_code = 0;     // set when help/usage was printed
};

/// Bad flags or values; maps to exit status 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses `volrelax <subcommand> [--config FILE] [flags]`. Config-file keys
/// are flag names without the leading dashes; command-line flags win.
[[nodiscard]] Invocation parse_invocation(const std::vector<std::string>& args, std::ostream& out,
                                          std::ostream& err);

/// Validates cross-field constraints; throws ConfigError.
void validate(const RunConfig& config, Command command);

[[nodiscard]] int resolved_max_lag(const RunConfig& config, bool daily);

void write_config_echo(std::ostream& out, const RunConfig& config, Command command);

[[nodiscard]] std::vector<double> parse_real_list(const std::string& text);
[[nodiscard]] std::string format_multiple(double m);

} // namespace volrelax::cli
