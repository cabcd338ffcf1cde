#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "volrelax/data.hpp"
#include "volrelax/events.hpp"
#include "volrelax/fitting.hpp"
#include "volrelax/tsv.hpp"
#include "volrelax_cli/commands.hpp"

namespace fs = std::filesystem;
using namespace volrelax;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("volrelax_test_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = slurp(e.path());
    return files;
}

std::vector<FitRow> fits_in(const fs::path& dir, const std::string& name = "fits.tsv") {
    std::ifstream in(dir / name);
    return read_fits_tsv(in);
}

const FitRow* find_row(const std::vector<FitRow>& rows, const std::string& side, double m,
                       const std::string& origin = "all", const std::string& sign = "all") {
    for (const auto& r : rows) {
        if (r.side == side && r.zeta_multiple == m && r.origin_filter == origin && r.sign_filter == sign &&
            r.fit.method == FitMethod::full_fit) {
            return &r;
        }
    }
    return nullptr;
}

// Daily price file whose volatility follows `vol` with alternating signs.
void write_daily(const fs::path& path, const std::vector<double>& vol) {
    std::ofstream out(path);
    out << "timestamp,price\n";
    double price = 100.0;
    std::chrono::sys_days d = *parse_date("2000-01-03");
    out << format_date(d) << ',' << format_real(price) << '\n';
    for (std::size_t i = 0; i < vol.size(); ++i) {
        price *= std::exp((i % 2 ? -1.0 : 1.0) * vol[i]);
        d += std::chrono::days{1};
        out << format_date(d) << ',' << format_real(price) << '\n';
    }
}

std::string synth_planted(const fs::path& dir, const std::string& n, const std::string& extra_seed = "1") {
    const auto csv = (dir / "planted.csv").string();
    REQUIRE(invoke({"synth", "--mode", "planted", "--n", n, "--seed", extra_seed, "--out", csv}).code == 0);
    return csv;
}

} // namespace

TEST_CASE("help and usage errors") {
    CHECK(invoke({"--help"}).code == 0);
    CHECK(invoke({"analyze", "--help"}).code == 0);
    CHECK(invoke({}).code == cli::kExitConfig);
    CHECK(invoke({"frobnicate"}).code == cli::kExitConfig);
    CHECK(invoke({"analyze"}).code == cli::kExitConfig);
    CHECK(invoke({"analyze", "--input", "x.csv", "--bogus"}).code == cli::kExitConfig);
    CHECK(invoke({"analyze", "--input", "x.csv", "--thresholds", "4,2"}).code == cli::kExitConfig);
    CHECK(invoke({"analyze", "--input", "x.csv", "--thresholds", "0.5"}).code == cli::kExitConfig);
    CHECK(invoke({"analyze", "--input", "x.csv", "--tau", "maybe"}).code == cli::kExitConfig);
    CHECK(invoke({"analyze", "--input", "x.csv", "--bootstrap", "10"}).code == cli::kExitConfig);
    CHECK(invoke({"analyze", "--input", "x.csv", "--split", "weekday"}).code == cli::kExitConfig);
    CHECK(invoke({"analyze", "--input", "x.csv", "--cadence", "hourly"}).code == cli::kExitConfig);
    CHECK(invoke({"analyze", "--config", "/nonexistent/run.cfg"}).code == cli::kExitConfig);
}

TEST_CASE("omori rejects aftershock thresholds at or above the main threshold") {
    const auto r = invoke({"omori", "--input", "x.csv", "--main-threshold", "12", "--z1", "2,12"});
    CHECK(r.code == cli::kExitConfig);
    CHECK(r.err.find("config error") != std::string::npos);
    CHECK(invoke({"omori", "--input", "x.csv", "--main-threshold", "6", "--z1", "8"}).code == cli::kExitConfig);
}

TEST_CASE("data problems exit with status 2") {
    const auto dir = scratch("data");
    CHECK(invoke({"analyze", "--input", (dir / "missing.csv").string(), "--out", (dir / "o").string()}).code ==
          cli::kExitData);
    std::ofstream(dir / "bad.csv") << "2000-01-03,100\n2000-01-04,0\n";
    CHECK(invoke({"analyze", "--input", (dir / "bad.csv").string(), "--out", (dir / "o").string()}).code ==
          cli::kExitData);
}

TEST_CASE("fit failures exit with status 3 and are marked in the report") {
    const auto dir = scratch("fitfail");
    std::vector<double> vol(300, 0.01);
    vol[150] = 0.3;
    write_daily(dir / "spike.csv", vol);
    const auto out = dir / "run";
    const auto r = invoke({"analyze", "--input", (dir / "spike.csv").string(), "--thresholds", "8", "--split", "all",
                        "--out", out.string()});
    CHECK(r.code == cli::kExitFit);
    const auto rows = fits_in(out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].failure == "InsufficientPositivePoints");
    CHECK(std::isnan(rows[0].fit.p));
    CHECK(fs::exists(out / "profile_z8.tsv"));
}

TEST_CASE("omori counts a hand series") {
    const auto dir = scratch("omori");
    std::vector<double> vol(40, 0.001);
    vol[5] = 0.030;
    vol[7] = 0.004;
    vol[10] = 0.004;
    write_daily(dir / "hand.csv", vol);
    // sigma = 0.0019 + ... ; 12 sigma < 0.030 and 2 sigma < 0.004.
    const auto out = dir / "run";
    const auto r = invoke({"omori", "--input", (dir / "hand.csv").string(), "--main-threshold", "12", "--z1", "2",
                        "--max-lag", "6", "--fit-min", "1", "--out", out.string()});
    CHECK(r.code == cli::kExitFit);
    CHECK(slurp(out / "omori_z12_z12.tsv") ==
          "t\tN_minus\tN_plus\n1\t0\t0\n2\t0\t1\n3\t0\t1\n4\t0\t1\n5\t0\t2\n6\t0\t2\n");
    CHECK(fs::exists(out / "omori_fits.tsv"));
    CHECK(fs::exists(out / "config.echo"));
}

TEST_CASE("synth modes write CSV that parses back, deterministically") {
    const auto dir = scratch("synth");
    const std::vector<std::vector<std::string>> modes = {
        {"--mode", "iid", "--n", "1000"},
        {"--mode", "planted", "--n", "5000"},
        {"--mode", "intraday", "--base", "iid", "--n", "960", "--cadence", "5min", "--factors", "1.5,1,0.8"},
        {"--mode", "intraday", "--base", "planted", "--n", "4800", "--cadence", "1min", "--slots-per-day", "48",
         "--factors", "2,1,1,0.5"},
    };
    int k = 0;
    for (const auto& m : modes) {
        CAPTURE(k);
        auto args = std::vector<std::string>{"synth"};
        args.insert(args.end(), m.begin(), m.end());
        const auto a = (dir / ("a" + std::to_string(k) + ".csv")).string();
        const auto b = (dir / ("b" + std::to_string(k) + ".csv")).string();
        auto args_a = args, args_b = args;
        args_a.insert(args_a.end(), {"--seed", "5", "--out", a});
        args_b.insert(args_b.end(), {"--seed", "5", "--out", b});
        REQUIRE(invoke(args_a).code == 0);
        REQUIRE(invoke(args_b).code == 0);
        CHECK(slurp(a) == slurp(b));
        const auto prices = read_price_csv(a);
        CHECK(prices.size() == std::stoul(m[m[0] == "--mode" && m[1] == "intraday" ? 5 : 3]) + 1);
        ++k;
    }
    const auto c = (dir / "c.csv").string();
    REQUIRE(invoke({"synth", "--mode", "iid", "--n", "1000", "--seed", "6", "--out", c}).code == 0);
    CHECK(slurp(c) != slurp(dir / "a0.csv"));
    CHECK(invoke({"synth", "--mode", "planted", "--p", "2", "--out", c}).code == cli::kExitConfig);
    CHECK(invoke({"synth", "--mode", "banana", "--out", c}).code == cli::kExitConfig);
}

TEST_CASE("analyze recovers a planted exponent and the report re-fits from its TSV") {
    const auto dir = scratch("planted");
    const auto csv = synth_planted(dir, "1000000");
    const auto out = dir / "run";
    const auto r = invoke({"analyze", "--input", csv, "--thresholds", "4,10", "--max-lag", "1000", "--out", out.string()});
    REQUIRE(r.code == 0);
    const auto rows = fits_in(out);
    for (const char* side : {"minus", "plus"}) {
        const auto* row = find_row(rows, side, 10.0);
        REQUIRE(row != nullptr);
        CHECK(std::abs(row->fit.p - 0.3) < 0.05);
    }
    for (const auto& e : {"config.echo", "fits.tsv", "signal.tsv", "profile_z4.tsv", "profile_z10.tsv",
                          "profile_z10_crash.tsv", "profile_z10_rally.tsv"}) {
        CHECK(fs::exists(out / e));
    }
    CHECK_FALSE(fs::exists(out / "pattern.tsv"));

    const std::tuple<double, const char*, const char*> cases[] = {
        {4.0, "profile_z4.tsv", "all"}, {10.0, "profile_z10.tsv", "all"}, {10.0, "profile_z10_crash.tsv", "crash"}};
    for (const auto& [m, file, sign] : cases) {
        CAPTURE(file);
        std::ifstream in(out / file);
        const auto table = read_profile_tsv(in);
        for (const char* side : {"minus", "plus"}) {
            const auto* row = find_row(rows, side, m, "all", sign);
            REQUIRE(row != nullptr);
            FitConfig cfg;
            cfg.t_min = row->fit.t_min;
            cfg.t_max = row->fit.t_max;
            const auto& V = std::string(side) == "minus" ? table.cumulative.V_minus : table.cumulative.V_plus;
            const auto refit = fit_cumulative(V, cfg);
            CHECK(std::abs(refit.p - row->fit.p) < 1e-9);
            CHECK(std::abs(refit.tau - row->fit.tau) < 1e-9 * std::max(1.0, row->fit.tau));
            CHECK(std::abs(refit.A - row->fit.A) < 1e-9 * row->fit.A);
        }
    }
}

TEST_CASE("shuffle surrogate flags every profile as consistent with zero") {
    const auto dir = scratch("surrogate");
    const auto csv = synth_planted(dir, "1000000");
    const auto out = dir / "run";
    const auto r = invoke({"analyze", "--input", csv, "--thresholds", "4", "--surrogate", "shuffle", "--split", "all",
                        "--max-lag", "100", "--out", out.string()});
    CHECK((r.code == 0 || r.code == cli::kExitFit));
    std::istringstream signal(slurp(out / "signal.tsv"));
    std::string line;
    std::getline(signal, line);
    int rows = 0;
    while (std::getline(signal, line)) {
        CAPTURE(line);
        CHECK(line.substr(line.rfind('\t') + 1) == "yes");
        ++rows;
    }
    CHECK(rows == 2);
}

TEST_CASE("labels on daily data add endogenous and exogenous rows") {
    const auto dir = scratch("labels");
    const auto csv = (dir / "daily.csv").string();
    REQUIRE(invoke({"synth", "--mode", "planted", "--n", "20000", "--shock-rate", "100", "--boost", "1", "--seed", "3", "--out", csv})
                .code == 0);
    const auto prices = read_price_csv(csv);
    const auto returns = log_returns(prices);
    const auto vol = absolute_volatility(returns);
    const auto events = select_events(vol, 8.0, mean_volatility(vol));
    REQUIRE(events.size() > 10);
    {
        std::ofstream labels(dir / "labels.csv");
        for (std::size_t k = 0; k < events.size(); k += 2) {
            labels << format_date(returns.close_timestamps[events.events[k].index].date()) << ",exogenous,test\n";
        }
    }
    const auto out = dir / "run";
    const auto r = invoke({"analyze", "--input", csv, "--labels", (dir / "labels.csv").string(), "--thresholds", "8",
                        "--fit-min", "2", "--out", out.string()});
    CHECK((r.code == 0 || r.code == cli::kExitFit));
    const auto rows = fits_in(out);
    CHECK(find_row(rows, "minus", 8.0, "endogenous") != nullptr);
    CHECK(find_row(rows, "plus", 8.0, "exogenous") != nullptr);
    CHECK(find_row(rows, "plus", 8.0, "all", "crash") != nullptr);
    CHECK(fs::exists(out / "profile_z8_exogenous.tsv"));
    CHECK(fs::exists(out / "profile_z8_endogenous.tsv"));

    const auto ev = dir / "events";
    CHECK(invoke({"events", "--input", csv, "--labels", (dir / "labels.csv").string(), "--thresholds", "8", "--out",
               ev.string()})
              .code == 0);
    const auto text = slurp(ev / "events_z8.tsv");
    CHECK(text.find("exogenous") != std::string::npos);
    CHECK(text.find("endogenous") != std::string::npos);
}

TEST_CASE("pattern command and intraday removal") {
    const auto dir = scratch("pattern");
    const auto csv = (dir / "intraday.csv").string();
    REQUIRE(invoke({"synth", "--mode", "intraday", "--base", "iid", "--n", "48000", "--cadence", "5min", "--factors",
                 "2,1,1,0.5", "--slots-per-day", "4", "--out", csv})
                .code == 0);
    const auto out = dir / "run";
    REQUIRE(invoke({"pattern", "--input", csv, "--out", out.string()}).code == 0);
    std::istringstream in(slurp(out / "pattern.tsv"));
    std::string header;
    std::getline(in, header);
    CHECK(header == "slot\tfactor");
    const double expected[] = {2.0 / 1.125, 1.0 / 1.125, 1.0 / 1.125, 0.5 / 1.125};
    int slot;
    double factor;
    int n = 0;
    while (in >> slot >> factor) {
        CHECK(std::abs(factor - expected[slot]) < 0.05);
        ++n;
    }
    CHECK(n == 4);
    const auto daily = (dir / "daily.csv").string();
    REQUIRE(invoke({"synth", "--mode", "iid", "--n", "500", "--out", daily}).code == 0);
    CHECK(invoke({"pattern", "--input", daily, "--out", (dir / "daily").string()}).code == cli::kExitData);
}

TEST_CASE("config echo reproduces the run and flags override the file") {
    const auto dir = scratch("echo");
    const auto csv = synth_planted(dir, "200000", "9");
    const auto first = dir / "first";
    REQUIRE(invoke({"analyze", "--input", csv, "--thresholds", "6,10", "--max-lag", "300", "--fit-max", "250",
                 "--tau", "zero", "--tail-min", "50", "--tail-max", "300", "--split", "all", "--out", first.string()})
                .code == 0);
    const auto second = dir / "second";
    REQUIRE(invoke({"analyze", "--config", (first / "config.echo").string(), "--out", second.string()}).code == 0);
    CHECK(slurp(first / "fits.tsv") == slurp(second / "fits.tsv"));
    CHECK(slurp(first / "profile_z10.tsv") == slurp(second / "profile_z10.tsv"));
    const auto echo = slurp(second / "config.echo");
    CHECK(echo.find("out = " + second.string()) != std::string::npos);
    CHECK(echo.find("tau = zero") != std::string::npos);
    CHECK(echo.find("thresholds = 6,10") != std::string::npos);

    const auto third = dir / "third";
    REQUIRE(invoke({"analyze", "--config", (first / "config.echo").string(), "--thresholds", "10", "--out",
                 third.string()})
                .code == 0);
    CHECK(fits_in(third).size() == 4);
    CHECK_FALSE(fs::exists(third / "profile_z6.tsv"));
}

TEST_CASE("identical runs produce byte-identical directories, bootstrap included") {
    const auto dir = scratch("determinism");
    const auto csv = synth_planted(dir, "200000", "4");
    const auto out = dir / "run";
    const std::vector<std::string> args = {"analyze", "--input", csv, "--thresholds", "8,10", "--max-lag", "300",
                                           "--bootstrap", "50", "--seed", "11", "--out", out.string()};
    REQUIRE(invoke(args).code == 0);
    const auto first = snapshot(out);
    fs::remove_all(out);
    REQUIRE(invoke(args).code == 0);
    const auto second = snapshot(out);
    CHECK(first == second);
    const auto rows = fits_in(out);
    REQUIRE_FALSE(rows.empty());
    CHECK(rows.front().fit.p_stderr.has_value());
    CHECK(*rows.front().fit.p_stderr > 0.0);
}

TEST_CASE("omori fits on planted data recover the plant at intermediate aftershock thresholds") {
    const auto dir = scratch("omori_planted");
    const auto csv = synth_planted(dir, "1000000");
    const auto out = dir / "run";
    REQUIRE(invoke({"omori", "--input", csv, "--z1", "3,4", "--max-lag", "1000", "--out", out.string()}).code == 0);
    const auto rows = fits_in(out, "omori_fits.tsv");
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
        CAPTURE(r.zeta_multiple);
        CHECK(std::abs(r.fit.p - 0.3) < 0.1);
    }
    CHECK(fs::exists(out / "omori_z12_z13.tsv"));
    CHECK(fs::exists(out / "omori_z12_z14.tsv"));
}
