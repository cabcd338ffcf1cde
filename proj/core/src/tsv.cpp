#include "volrelax/tsv.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "volrelax/error.hpp"

namespace volrelax {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) out.push_back(field);
    return out;
}

double to_real(const std::string& s) {
    if (s == "nan" || s == "NA") return std::numeric_limits<double>::quiet_NaN();
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw Error(ErrorCode::MalformedRow, "bad number '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::MalformedRow, "bad number '" + s + "'");
    }
}

} // namespace

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    return fmt::format("{:.17g}", x);
}

void write_fit_header(std::ostream& out) {
    out << kFitHeader << '\n';
}

void write_fit_row(std::ostream& out, const FitRow& row) {
    const auto& f = row.fit;
    const bool failed = !row.failure.empty();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out << row.side << '\t' << format_real(row.zeta_multiple) << '\t' << row.origin_filter << '\t'
        << row.sign_filter << '\t' << format_real(failed ? nan : f.p) << '\t'
        << (f.p_stderr && !failed ? format_real(*f.p_stderr) : std::string("NA")) << '\t'
        << format_real(failed ? nan : f.tau) << '\t' << format_real(failed ? nan : f.A) << '\t' << f.t_min
        << '\t' << f.t_max << '\t'
        << (failed ? "failed:" + row.failure : std::string(to_string(f.method))) << '\t'
        << format_real(failed ? nan : f.rms_log_residual) << '\n';
}

std::vector<FitRow> read_fits_tsv(std::istream& in) {
    std::vector<FitRow> rows;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            if (line != kFitHeader) throw Error(ErrorCode::MalformedRow, "unexpected fit report header");
            continue;
        }
        if (line.empty()) continue;
        const auto f = split_tabs(line);
        if (f.size() != 12) throw Error(ErrorCode::MalformedRow, "fit row needs 12 columns");
        FitRow row;
        row.side = f[0];
        row.zeta_multiple = to_real(f[1]);
        row.origin_filter = f[2];
        row.sign_filter = f[3];
        row.fit.p = to_real(f[4]);
        if (f[5] != "NA") row.fit.p_stderr = to_real(f[5]);
        row.fit.tau = to_real(f[6]);
        row.fit.A = to_real(f[7]);
        row.fit.t_min = std::stoi(f[8]);
        row.fit.t_max = std::stoi(f[9]);
        if (f[10] == "full_fit") {
            row.fit.method = FitMethod::full_fit;
        } else if (f[10] == "tail_slope") {
            row.fit.method = FitMethod::tail_slope;
        } else if (f[10].rfind("failed:", 0) == 0) {
            row.failure = f[10].substr(7);
        } else {
            throw Error(ErrorCode::MalformedRow, "unknown fit method '" + f[10] + "'");
        }
        row.fit.rms_log_residual = to_real(f[11]);
        rows.push_back(std::move(row));
    }
    return rows;
}

ProfileTable read_profile_tsv(std::istream& in) {
    ProfileTable table;
    auto& p = table.profile;
    auto& c = table.cumulative;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        const auto f = split_tabs(line);
        if (f.size() != 7) throw Error(ErrorCode::MalformedRow, "profile row needs 7 columns");
        const auto t = static_cast<std::size_t>(std::stoul(f[0]));
        if (t != p.v_minus.size()) throw Error(ErrorCode::MalformedRow, "profile lags are not consecutive");
        p.v_minus.push_back(to_real(f[1]));
        p.v_plus.push_back(to_real(f[2]));
        if (t > 0) {
            c.V_minus.push_back(to_real(f[3]));
            c.V_plus.push_back(to_real(f[4]));
        }
        p.counts_minus.push_back(std::stoul(f[5]));
        p.counts_plus.push_back(std::stoul(f[6]));
    }
    if (p.v_minus.size() < 2) throw Error(ErrorCode::TooShort, "profile has no lags");
    p.max_lag = static_cast<int>(p.v_minus.size()) - 1;
    p.n_events = p.counts_minus.front();
    return table;
}

} // namespace volrelax
