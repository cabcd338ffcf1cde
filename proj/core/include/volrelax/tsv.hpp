#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "volrelax/fitting.hpp"
#include "volrelax/profiles.hpp"

namespace volrelax {

/// One row of the fit report.
struct FitRow {
    std::string side;          // "minus" or "plus"
    double zeta_multiple = 0.0;
    std::string origin_filter = "all";
    std::string sign_filter = "all";
    PowerLawFit fit;
    /// Empty on success, otherwise the error code name; failed rows keep the
    /// range columns and report NaN estimates.
    std::string failure;
};

inline constexpr const char* kFitHeader =
    "side\tzeta_multiple\torigin_filter\tsign_filter\tp\tp_stderr\ttau\tA\tt_min\tt_max\tmethod\trms_log_residual";

void write_fit_header(std::ostream& out);
void write_fit_row(std::ostream& out, const FitRow& row);
[[nodiscard]] std::vector<FitRow> read_fits_tsv(std::istream& in);

/// Parses a profile TSV written by write_profile_tsv.
struct ProfileTable {
    ConditionedProfile profile;
    CumulativeProfile cumulative;
};
[[nodiscard]] ProfileTable read_profile_tsv(std::istream& in);

/// Shortest round-trip representation for TSV output ("nan" for NaN).
[[nodiscard]] std::string format_real(double x);

} // namespace volrelax
