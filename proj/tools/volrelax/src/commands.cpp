#include "volrelax_cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <fstream>
#include <optional>

#include <fmt/format.h>

#include "volrelax/volrelax.hpp"

namespace volrelax::cli {

namespace fs = std::filesystem;

namespace {

struct Prepared {
    PriceSeries prices;
    ReturnSeries returns;
    VolatilitySeries vol;
    SeriesStats stats;
    std::optional<IntradayPattern> pattern;
};

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    return out;
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create output directory " + dir + ": " + ec.message());
}

Prepared prepare(const RunConfig& rc, std::ostream& log) {
    Prepared d;
    CsvSchema schema;
    schema.slots_per_day = rc.slots_per_day;
    d.prices = read_price_csv(rc.input, schema);
    if (!rc.cadence.empty() && rc.cadence != d.prices.cadence) {
        throw Error(ErrorCode::MalformedRow,
                    fmt::format("declared cadence {} but the data has {}", rc.cadence, d.prices.cadence));
    }
    d.returns = log_returns(d.prices, {rc.drop_overnight});
    if (rc.surrogate == "shuffle") d.returns = shuffle_surrogate(d.returns, rc.seed);
    d.vol = absolute_volatility(d.returns);
    if (!d.prices.is_daily() && rc.intraday_removal) {
        d.pattern = estimate_pattern(d.vol);
        d.vol = remove_pattern(d.vol, *d.pattern);
    }
    d.stats = mean_volatility(d.vol);
    log << fmt::format("{} returns, cadence {}, {} slots/day, sigma = {:.6g}{}\n", d.returns.size(),
                       d.prices.cadence, d.prices.slots_per_day, d.stats.sigma,
                       d.pattern ? " (intraday pattern removed)" : "");
    return d;
}

void write_pattern_if_any(const Prepared& d, const RunConfig& rc) {
    if (!d.pattern) return;
    auto out = open_output(fs::path(rc.out) / "pattern.tsv");
    write_pattern_tsv(out, *d.pattern);
}

void write_echo(const RunConfig& rc, Command command) {
    auto out = open_output(fs::path(rc.out) / "config.echo");
    write_config_echo(out, rc, command);
}

struct Split {
    std::string suffix;
    std::string origin_name = "all";
    std::string sign_name = "all";
    EventFilter filter;
};

std::vector<Split> splits_for(const RunConfig& rc, bool have_origin) {
    std::vector<Split> out;
    for (const auto& s : rc.split) {
        if (s == "all") {
            out.push_back({"", "all", "all", {}});
        } else if (s == "sign") {
            out.push_back({"_crash", "all", "crash", {Sign::crash, std::nullopt}});
            out.push_back({"_rally", "all", "rally", {Sign::rally, std::nullopt}});
        } else if (s == "origin" && have_origin) {
            out.push_back({"_endogenous", "endogenous", "all", {std::nullopt, Origin::endogenous}});
            out.push_back({"_exogenous", "exogenous", "all", {std::nullopt, Origin::exogenous}});
        }
    }
    return out;
}

FitConfig fit_config(const RunConfig& rc) {
    FitConfig f;
    f.t_min = rc.fit_min;
    f.t_max = rc.fit_max;
    f.tau_mode = rc.tau == "zero" ? TauMode::fixed_zero : TauMode::free;
    return f;
}

FitRow failed_row(const std::string& side, double m, const Split& split, int t_min, int t_max, ErrorCode code) {
    FitRow row;
    row.side = side;
    row.zeta_multiple = m;
    row.origin_filter = split.origin_name;
    row.sign_filter = split.sign_name;
    row.fit.t_min = t_min;
    row.fit.t_max = t_max;
    row.failure = std::string(to_string(code));
    return row;
}

// Mean of v(t) over t = 1..min(100, T) against a noise bound from the
// lag-to-lag spread.
struct SignalCheck {
    double mean = 0.0;
    double bound = 0.0;
    bool consistent_with_zero = true;
};

SignalCheck signal_check(const std::vector<double>& v) {
    const std::size_t last = std::min<std::size_t>(100, v.size() - 1);
    std::vector<double> xs;
    for (std::size_t t = 1; t <= last; ++t) {
        if (std::isfinite(v[t])) xs.push_back(v[t]);
    }
    SignalCheck c;
    if (xs.size() < 2) return c;
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    c.mean = mean;
    c.bound = std::max(0.01, 3.0 * sd / std::sqrt(static_cast<double>(xs.size())));
    c.consistent_with_zero = std::abs(mean) < c.bound;
    return c;
}

int guarded(const std::function<int()>& body, std::ostream& log) {
    try {
        return body();
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        if (e.code() == ErrorCode::InvalidArgument) return kExitConfig;
        return is_data_error(e.code()) ? kExitData : kExitFit;
    }
}

} // namespace

int cmd_analyze(const RunConfig& rc, std::ostream& log) {
    return guarded([&] {
        validate(rc, Command::analyze);
        const Prepared d = prepare(rc, log);
        const int T = resolved_max_lag(rc, d.prices.is_daily());
        if (rc.fit_max > T || rc.fit_min >= T || rc.tail_max > T) throw ConfigError("fit range exceeds max lag");
        ensure_out_dir(rc.out);
        write_echo(rc, Command::analyze);
        write_pattern_if_any(d, rc);

        std::vector<EventLabel> labels;
        const bool have_origin = !rc.labels.empty() && d.prices.is_daily();
        if (!rc.labels.empty()) {
            labels = read_labels(rc.labels);
            if (!d.prices.is_daily()) log << "warning: labels ignored for intraday data\n";
        }

        auto fits = open_output(fs::path(rc.out) / "fits.tsv");
        write_fit_header(fits);
        auto signal = open_output(fs::path(rc.out) / "signal.tsv");
        signal << "zeta_multiple\torigin_filter\tsign_filter\tside\tmean_v\tbound\tconsistent_with_zero\n";

        const FitConfig fcfg = fit_config(rc);
        const int fit_max = rc.fit_max ? rc.fit_max : T;
        bool failed = false;

        for (double m : rc.thresholds) {
            const auto splits = splits_for(rc, have_origin);
            EventSet all;
            try {
                all = classify_sign(d.returns, select_events(d.vol, m, d.stats, {rc.min_separation}));
            } catch (const Error& e) {
                if (e.code() != ErrorCode::NoEvents) throw;
                log << fmt::format("z={}: no events\n", format_multiple(m));
                for (const auto& s : splits) {
                    write_fit_row(fits, failed_row("minus", m, s, rc.fit_min, fit_max, e.code()));
                    write_fit_row(fits, failed_row("plus", m, s, rc.fit_min, fit_max, e.code()));
                }
                failed = true;
                continue;
            }
            if (have_origin) {
                auto labeled = apply_labels(all, labels, d.returns.close_timestamps);
                for (auto day : labeled.unmatched) {
                    log << fmt::format("z={}: label {} matches no event\n", format_multiple(m), format_date(day));
                }
                all = std::move(labeled.events);
            }
            log << fmt::format("z={}: {} events\n", format_multiple(m), all.size());

            for (const auto& split : splits) {
                const EventSet sub = filter_events(all, split.filter);
                std::optional<ConditionedProfile> profile;
                ErrorCode why = ErrorCode::NoEvents;
                if (!sub.empty()) {
                    try {
                        profile = remanent_profile(d.vol, sub, T);
                    } catch (const Error& e) {
                        if (is_data_error(e.code())) throw;
                        why = e.code();
                    }
                }
                if (!profile) {
                    write_fit_row(fits, failed_row("minus", m, split, rc.fit_min, fit_max, why));
                    write_fit_row(fits, failed_row("plus", m, split, rc.fit_min, fit_max, why));
                    failed = true;
                    continue;
                }
                const auto cum = cumulative(*profile);
                {
                    auto out = open_output(fs::path(rc.out) /
                                           fmt::format("profile_z{}{}.tsv", format_multiple(m), split.suffix));
                    write_profile_tsv(out, *profile, cum);
                }

                std::optional<BootstrapResult> boot;
                if (rc.bootstrap > 0) {
                    try {
                        BootstrapConfig bc;
                        bc.max_lag = T;
                        bc.fit = fcfg;
                        bc.replicas = rc.bootstrap;
                        bc.seed = rc.seed;
                        boot = bootstrap_errors(d.vol, sub, bc);
                    } catch (const Error& e) {
                        log << fmt::format("z={}{}: bootstrap skipped: {}\n", format_multiple(m), split.suffix, e.what());
                    }
                }

                const std::pair<const char*, const std::vector<double>*> sides[] = {{"minus", &cum.V_minus},
                                                                                      {"plus", &cum.V_plus}};
                for (const auto& [side, series] : sides) {
                    FitRow row;
                    row.side = side;
                    row.zeta_multiple = m;
                    row.origin_filter = split.origin_name;
                    row.sign_filter = split.sign_name;
                    try {
                        row.fit = fit_cumulative(*series, fcfg);
                        if (boot) row.fit.p_stderr = row.side == "minus" ? boot->stderr_minus : boot->stderr_plus;
                    } catch (const Error& e) {
                        row = failed_row(side, m, split, rc.fit_min, fit_max, e.code());
                        failed = true;
                    }
                    write_fit_row(fits, row);
                    if (rc.tail_min > 0) {
                        FitRow tail = row;
                        tail.failure.clear();
                        try {
                            tail.fit = tail_slope(*series, rc.tail_min, rc.tail_max);
                        } catch (const Error& e) {
                            tail = failed_row(side, m, split, rc.tail_min, rc.tail_max, e.code());
                            failed = true;
                        }
                        write_fit_row(fits, tail);
                    }
                }

                const std::pair<const char*, const std::vector<double>*> vs[] = {{"minus", &profile->v_minus},
                                                                                   {"plus", &profile->v_plus}};
                for (const auto& [side, v] : vs) {
                    const auto c = signal_check(*v);
                    signal << format_multiple(m) << '\t' << split.origin_name << '\t' << split.sign_name << '\t'
                           << side << '\t' << format_real(c.mean) << '\t' << format_real(c.bound) << '\t'
                           << (c.consistent_with_zero ? "yes" : "no") << '\n';
                }
            }
        }
        return failed ? kExitFit : kExitOk;
    }, log);
}

int cmd_omori(const RunConfig& rc, std::ostream& log) {
    return guarded([&] {
        validate(rc, Command::omori);
        const Prepared d = prepare(rc, log);
        const int T = resolved_max_lag(rc, d.prices.is_daily());
        if (rc.fit_max > T || rc.fit_min >= T) throw ConfigError("fit range exceeds max lag");
        ensure_out_dir(rc.out);
        write_echo(rc, Command::omori);
        write_pattern_if_any(d, rc);

        auto fits = open_output(fs::path(rc.out) / "omori_fits.tsv");
        write_fit_header(fits);
        const FitConfig fcfg = fit_config(rc);
        const int fit_max = rc.fit_max ? rc.fit_max : T;
        const Split all{"", "all", "all", {}};

        EventSet main;
        try {
            main = select_events(d.vol, rc.main_threshold, d.stats, {rc.min_separation});
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NoEvents) throw;
            log << "no main shocks above " << format_multiple(rc.main_threshold) << " sigma\n";
            for (double m1 : rc.z1) {
                write_fit_row(fits, failed_row("minus", m1, all, rc.fit_min, fit_max, e.code()));
                write_fit_row(fits, failed_row("plus", m1, all, rc.fit_min, fit_max, e.code()));
            }
            return kExitFit;
        }
        log << fmt::format("{} main shocks above {} sigma\n", main.size(), format_multiple(rc.main_threshold));

        bool failed = false;
        for (double m1 : rc.z1) {
            const auto omori = omori_counts(d.vol, main, m1, d.stats, T);
            {
                auto out = open_output(fs::path(rc.out) / fmt::format("omori_z{}_z1{}.tsv",
                                                                      format_multiple(rc.main_threshold),
                                                                      format_multiple(m1)));
                write_omori_tsv(out, omori);
            }
            const std::pair<const char*, const std::vector<double>*> sides[] = {{"minus", &omori.N_minus},
                                                                                  {"plus", &omori.N_plus}};
            for (const auto& [side, series] : sides) {
                FitRow row;
                row.side = side;
                row.zeta_multiple = m1;
                try {
                    row.fit = fit_cumulative(*series, fcfg);
                } catch (const Error& e) {
                    row = failed_row(side, m1, all, rc.fit_min, fit_max, e.code());
                    failed = true;
                }
                write_fit_row(fits, row);
            }
        }
        return failed ? kExitFit : kExitOk;
    }, log);
}

int cmd_pattern(const RunConfig& rc, std::ostream& log) {
    return guarded([&] {
        validate(rc, Command::pattern);
        RunConfig raw = rc;
        raw.intraday_removal = false;
        const Prepared d = prepare(raw, log);
        const auto pattern = estimate_pattern(d.vol);
        ensure_out_dir(rc.out);
        write_echo(rc, Command::pattern);
        auto out = open_output(fs::path(rc.out) / "pattern.tsv");
        write_pattern_tsv(out, pattern);
        return kExitOk;
    }, log);
}

int cmd_events(const RunConfig& rc, std::ostream& log) {
    return guarded([&] {
        validate(rc, Command::events);
        const Prepared d = prepare(rc, log);
        ensure_out_dir(rc.out);
        write_echo(rc, Command::events);
        std::vector<EventLabel> labels;
        if (!rc.labels.empty()) labels = read_labels(rc.labels);
        bool failed = false;
        for (double m : rc.thresholds) {
            EventSet set;
            try {
                set = classify_sign(d.returns, select_events(d.vol, m, d.stats, {rc.min_separation}));
            } catch (const Error& e) {
                if (e.code() != ErrorCode::NoEvents) throw;
                set.zeta_multiple = m;
                failed = true;
            }
            if (!labels.empty() && d.prices.is_daily() && !set.empty()) {
                set = apply_labels(set, labels, d.returns.close_timestamps).events;
            }
            auto out = open_output(fs::path(rc.out) / fmt::format("events_z{}.tsv", format_multiple(m)));
            write_events_tsv(out, set, d.returns);
            log << fmt::format("z={}: {} events\n", format_multiple(m), set.size());
        }
        return failed ? kExitFit : kExitOk;
    }, log);
}

int cmd_synth(const SynthConfig& sc, std::ostream& log) {
    return guarded([&] {
        std::int64_t step = 0;
        if (sc.cadence == "1min") step = 60;
        if (sc.cadence == "5min") step = 300;
        const int slots = step == 0 ? 1 : sc.slots_per_day;

        auto planted = [&] {
            PlantedRelaxationSpec spec;
            spec.n = sc.n;
            spec.sigma0 = sc.sigma0;
            spec.shock_rate = sc.shock_rate;
            spec.boost = sc.boost;
            spec.p = sc.p;
            spec.tau = sc.tau;
            spec.shock_magnitude = sc.shock_magnitude;
            spec.seed = sc.seed;
            spec.boost_before = sc.boost_before;
            spec.p_before = sc.p_before;
            spec.kernel_cutoff = sc.kernel_cutoff;
            return gen_planted_relaxation(spec).returns;
        };

        ReturnSeries returns;
        if (sc.mode == "iid") {
            returns = gen_iid_gaussian(sc.n, sc.sigma0, sc.seed);
        } else if (sc.mode == "planted") {
            returns = planted();
        } else {
            const ReturnSeries base = sc.base == "iid" ? gen_iid_gaussian(sc.n, sc.sigma0, sc.seed) : planted();
            returns = gen_intraday_modulated(with_periodic_slots(base, slots), sc.factors);
        }

        const PriceSeries prices = to_price_series(returns, slots, step);
        const fs::path path(sc.out);
        if (path.has_parent_path()) ensure_out_dir(path.parent_path().string());
        auto out = open_output(path);
        write_price_csv(out, prices);
        log << fmt::format("wrote {} prices ({} mode, {}) to {}\n", prices.size(), sc.mode, prices.cadence, sc.out);
        return kExitOk;
    }, log);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Invocation inv;
    try {
        inv = parse_invocation(args, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    if (inv.help) return inv.exit_code;
    switch (inv.command) {
    case Command::analyze: return cmd_analyze(inv.run, err);
    case Command::omori: return cmd_omori(inv.run, err);
    case Command::pattern: return cmd_pattern(inv.run, err);
    case Command::events: return cmd_events(inv.run, err);
    case Command::synth: return cmd_synth(inv.synth, err);
    }
    return kExitConfig;
}

} // namespace volrelax::cli
