#include "volrelax_cli/run_config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

namespace volrelax::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

// `key = value` lines become `--key=value` tokens.
std::vector<std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::vector<std::string> tokens;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(fmt::format("{}:{}: expected key = value", path, line_no));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(fmt::format("{}:{}: empty key", path, line_no));
        if (key == "command") continue;
        tokens.push_back("--" + key + "=" + value);
    }
    return tokens;
}

std::string join(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += format_multiple(xs[i]);
    }
    return out;
}

std::string join(const std::vector<std::string>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += xs[i];
    }
    return out;
}

std::string_view command_name(Command c) {
    switch (c) {
    case Command::analyze: return "analyze";
    case Command::omori: return "omori";
    case Command::synth: return "synth";
    case Command::pattern: return "pattern";
    case Command::events: return "events";
    }
    return "analyze";
}

struct ListOptions {
    std::string thresholds;
    std::string split;
    std::string z1;
    std::string factors;
    bool no_removal = false;
};

void add_input_options(CLI::App& sub, RunConfig& rc, ListOptions& lists) {
    sub.add_option("--input", rc.input, "Price CSV (timestamp,price)")->required();
    sub.add_option("--cadence", rc.cadence, "Declared cadence")->check(CLI::IsMember({"1min", "5min", "daily"}));
    sub.add_option("--slots-per-day", rc.slots_per_day, "Intraday slots per day (default: from timestamps)")
        ->check(CLI::NonNegativeNumber);
    sub.add_flag("--no-intraday-removal", lists.no_removal, "Keep the intraday volatility pattern");
    sub.add_flag("--drop-overnight", rc.drop_overnight, "Drop returns that cross a session boundary");
    sub.add_option("--surrogate", rc.surrogate, "Null model applied to the returns")
        ->check(CLI::IsMember({"none", "shuffle"}));
    sub.add_option("--seed", rc.seed, "Seed for surrogates and bootstrap");
    sub.add_option("--out", rc.out, "Output directory");
}

void add_analysis_options(CLI::App& sub, RunConfig& rc, ListOptions& lists) {
    sub.add_option("--labels", rc.labels, "Event label file (daily data)");
    sub.add_option("--max-lag", rc.max_lag, "Largest lag T (default 1000 intraday, 100 daily)")
        ->check(CLI::NonNegativeNumber);
    sub.add_option("--fit-min", rc.fit_min, "First lag of the fit range")->check(CLI::PositiveNumber);
    sub.add_option("--fit-max", rc.fit_max, "Last lag of the fit range (default T)")->check(CLI::NonNegativeNumber);
    sub.add_option("--tau", rc.tau, "Offset mode")->check(CLI::IsMember({"free", "zero"}));
    sub.add_option("--bootstrap", rc.bootstrap, "Bootstrap replicas for p errors (0 = off)");
    sub.add_option("--min-separation", rc.min_separation, "Decluster events closer than this many steps");
    sub.add_option("--tail-min", rc.tail_min, "First lag of the tail-slope range (0 = off)")
        ->check(CLI::NonNegativeNumber);
    sub.add_option("--tail-max", rc.tail_max, "Last lag of the tail-slope range")->check(CLI::NonNegativeNumber);
    (void)lists;
}

} // namespace

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::logic_error&) {
            throw ConfigError("bad number '" + item + "'");
        }
        if (used != item.size()) throw ConfigError("bad number '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::string format_multiple(double m) {
    return fmt::format("{:g}", m);
}

Invocation parse_invocation(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Invocation inv;
    ListOptions lists;
    RunConfig& rc = inv.run;
    SynthConfig& sc = inv.synth;

    // Expand --config into tokens placed before the real flags so that
    // explicit flags override file values.
    std::vector<std::string> expanded;
    std::vector<std::string> file_tokens;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--config") {
            if (i + 1 >= args.size()) throw ConfigError("--config needs a file");
            const auto t = read_config_file(args[++i]);
            file_tokens.insert(file_tokens.end(), t.begin(), t.end());
        } else if (a.rfind("--config=", 0) == 0) {
            const auto t = read_config_file(a.substr(9));
            file_tokens.insert(file_tokens.end(), t.begin(), t.end());
        } else {
            expanded.push_back(a);
        }
    }
    if (!expanded.empty() && !file_tokens.empty()) {
        expanded.insert(expanded.begin() + 1, file_tokens.begin(), file_tokens.end());
    }

    CLI::App app{"Event-conditioned volatility relaxation analysis", "volrelax"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    auto* analyze = app.add_subcommand("analyze", "Profiles v±, cumulatives V± and power-law fits");
    add_input_options(*analyze, rc, lists);
    add_analysis_options(*analyze, rc, lists);
    analyze->add_option("--thresholds", lists.thresholds, "Threshold multiples of sigma, e.g. 2,4,6,8");
    analyze->add_option("--split", lists.split, "Event splits: all, sign, origin (comma list)");

    auto* omori = app.add_subcommand("omori", "Two-threshold exceedance counts N±(t)");
    add_input_options(*omori, rc, lists);
    add_analysis_options(*omori, rc, lists);
    omori->add_option("--main-threshold", rc.main_threshold, "Main-shock multiple of sigma");
    omori->add_option("--z1", lists.z1, "Aftershock threshold multiples, e.g. 2,3,4,5");

    auto* pattern = app.add_subcommand("pattern", "Estimate and dump the intraday pattern");
    add_input_options(*pattern, rc, lists);

    auto* events = app.add_subcommand("events", "List selected large-volatility events");
    add_input_options(*events, rc, lists);
    events->add_option("--thresholds", lists.thresholds, "Threshold multiples of sigma");
    events->add_option("--labels", rc.labels, "Event label file (daily data)");
    events->add_option("--min-separation", rc.min_separation, "Decluster events closer than this many steps");

    auto* synth = app.add_subcommand("synth", "Write a synthetic price series as CSV");
    synth->add_option("--mode", sc.mode, "Generator")->check(CLI::IsMember({"iid", "planted", "intraday"}));
    synth->add_option("--base", sc.base, "Base generator for intraday mode")->check(CLI::IsMember({"iid", "planted"}));
    synth->add_option("--n", sc.n, "Number of returns")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
    synth->add_option("--sigma0", sc.sigma0, "Baseline mean volatility")->check(CLI::PositiveNumber);
    synth->add_option("--seed", sc.seed, "Generator seed");
    synth->add_option("--shock-rate", sc.shock_rate, "Main shocks per 1e5 steps")->check(CLI::NonNegativeNumber);
    synth->add_option("--boost", sc.boost, "Relaxation amplitude B")->check(CLI::NonNegativeNumber);
    synth->add_option("--p", sc.p, "Relaxation exponent");
    synth->add_option("--tau", sc.tau, "Relaxation offset")->check(CLI::NonNegativeNumber);
    synth->add_option("--shock-magnitude", sc.shock_magnitude, "Shock size in units of sigma0")
        ->check(CLI::PositiveNumber);
    synth->add_option("--boost-before", sc.boost_before, "Amplitude before shocks (default: --boost)");
    synth->add_option("--p-before", sc.p_before, "Exponent before shocks (default: --p)");
    synth->add_option("--kernel-cutoff", sc.kernel_cutoff, "Kernel range in steps");
    synth->add_option("--cadence", sc.cadence, "Calendar of the written file")
        ->check(CLI::IsMember({"1min", "5min", "daily"}));
    synth->add_option("--slots-per-day", sc.slots_per_day, "Slots per day for intraday calendars")
        ->check(CLI::PositiveNumber);
    synth->add_option("--factors", lists.factors, "Intraday factors, one per slot (comma list)");
    synth->add_option("--out", sc.out, "Output CSV path");

    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        inv.help = true;
        inv.exit_code = app.exit(e, out, err);
        return inv;
    } catch (const CLI::CallForAllHelp& e) {
        inv.help = true;
        inv.exit_code = app.exit(e, out, err);
        return inv;
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    if (analyze->parsed()) inv.command = Command::analyze;
    else if (omori->parsed()) inv.command = Command::omori;
    else if (pattern->parsed()) inv.command = Command::pattern;
    else if (events->parsed()) inv.command = Command::events;
    else inv.command = Command::synth;

    if (!lists.thresholds.empty()) rc.thresholds = parse_real_list(lists.thresholds);
    if (!lists.z1.empty()) rc.z1 = parse_real_list(lists.z1);
    if (!lists.factors.empty()) sc.factors = parse_real_list(lists.factors);
    if (!lists.split.empty()) rc.split = split_list(lists.split);
    else if (!rc.labels.empty()) rc.split.push_back("origin");
    rc.intraday_removal = !lists.no_removal;

    if (inv.command == Command::synth) {
        if (sc.mode == "intraday" && sc.factors.empty()) throw ConfigError("intraday mode needs --factors");
        if (sc.mode == "intraday" && sc.cadence == "daily") throw ConfigError("intraday mode needs an intraday --cadence");
        if (!sc.factors.empty()) sc.slots_per_day = static_cast<int>(sc.factors.size());
    } else {
        validate(rc, inv.command);
    }
    return inv;
}

void validate(const RunConfig& rc, Command command) {
    if (rc.input.empty()) throw ConfigError("--input is required");
    if (command == Command::analyze || command == Command::events) {
        if (rc.thresholds.empty()) throw ConfigError("no thresholds given");
        for (double m : rc.thresholds) {
            if (!(m > 1.0)) throw ConfigError(fmt::format("threshold {} must exceed 1", m));
        }
        if (!std::is_sorted(rc.thresholds.begin(), rc.thresholds.end())) {
            throw ConfigError("thresholds must be sorted ascending");
        }
    }
    if (command == Command::omori) {
        if (!(rc.main_threshold > 1.0)) throw ConfigError("main threshold must exceed 1");
        if (rc.z1.empty()) throw ConfigError("no aftershock thresholds given");
        for (double m1 : rc.z1) {
            if (!(m1 > 0.0) || m1 >= rc.main_threshold) {
                throw ConfigError(fmt::format("aftershock threshold {} must lie in (0, {})", m1, rc.main_threshold));
            }
        }
    }
    for (const auto& s : rc.split) {
        if (s != "all" && s != "sign" && s != "origin") throw ConfigError("unknown split '" + s + "'");
    }
    if (rc.fit_max != 0 && rc.fit_max <= rc.fit_min) throw ConfigError("--fit-max must exceed --fit-min");
    if (rc.max_lag != 0 && rc.fit_max > rc.max_lag) throw ConfigError("--fit-max exceeds --max-lag");
    if (rc.max_lag != 0 && rc.fit_min >= rc.max_lag) throw ConfigError("--fit-min must be below --max-lag");
    if (rc.tail_min != 0 && (rc.tail_max <= rc.tail_min || (rc.max_lag != 0 && rc.tail_max > rc.max_lag))) {
        throw ConfigError("tail range must satisfy tail-min < tail-max <= max-lag");
    }
    if (rc.bootstrap != 0 && rc.bootstrap < 50) throw ConfigError("--bootstrap needs at least 50 replicas");
}

int resolved_max_lag(const RunConfig& rc, bool daily) {
    if (rc.max_lag > 0) return rc.max_lag;
    return daily ? 100 : 1000;
}

void write_config_echo(std::ostream& out, const RunConfig& rc, Command command) {
    out << "command = " << command_name(command) << '\n';
    out << "input = " << rc.input << '\n';
    if (!rc.cadence.empty()) out << "cadence = " << rc.cadence << '\n';
    out << "slots-per-day = " << rc.slots_per_day << '\n';
    out << "no-intraday-removal = " << (rc.intraday_removal ? "false" : "true") << '\n';
    out << "drop-overnight = " << (rc.drop_overnight ? "true" : "false") << '\n';
    out << "surrogate = " << rc.surrogate << '\n';
    out << "seed = " << rc.seed << '\n';
    out << "out = " << rc.out << '\n';
    if (command == Command::pattern) return;
    if (!rc.labels.empty()) out << "labels = " << rc.labels << '\n';
    out << "min-separation = " << rc.min_separation << '\n';
    if (command == Command::events) {
        out << "thresholds = " << join(rc.thresholds) << '\n';
        return;
    }
    out << "max-lag = " << rc.max_lag << '\n';
    out << "fit-min = " << rc.fit_min << '\n';
    out << "fit-max = " << rc.fit_max << '\n';
    out << "tau = " << rc.tau << '\n';
    out << "tail-min = " << rc.tail_min << '\n';
    out << "tail-max = " << rc.tail_max << '\n';
    out << "bootstrap = " << rc.bootstrap << '\n';
    if (command == Command::analyze) {
        out << "thresholds = " << join(rc.thresholds) << '\n';
        out << "split = " << join(rc.split) << '\n';
    } else {
        out << "main-threshold = " << format_multiple(rc.main_threshold) << '\n';
        out << "z1 = " << join(rc.z1) << '\n';
    }
}

} // namespace volrelax::cli
