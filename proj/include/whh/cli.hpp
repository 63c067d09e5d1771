#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "whh/errors.hpp"

namespace whh {

struct RunConfig {
    std::string a_path;
    std::string b_path;
    std::string sign = "both";    // plus | minus | both
    std::string op = "analyze";   // analyze | kernel | cokernel | verify | oracle | sample
    int galerkin_n = 64;
    double svd_tol = 1e-7;
    double residual_tol = 1e-8;
    std::optional<std::string> grid;    // "start:stop:count"
    std::optional<std::string> free_f;  // piecewise JSON file
    std::string out;                    // empty: standard output
};

struct RunResult {
    int exit_code = 0;
    std::string report;
    std::string diagnostic;
    /// False when the report still has to be shown (no --out, or --out took a binary matrix).
    bool written = false;
};

/// 0 ok, 1 parse/input error, 2 CaseUnsupported, 3 NotMatching/NotInvertibleInG,
/// 4 RootOnAxis/PoleOnAxis, 5 any other library failure.
int exit_code_for(ErrorCode code);

/// "start:stop:count" with count >= 2 and start < stop; throws Parse.
std::vector<long double> parse_grid(const std::string& text);

/// Pretty JSON with sorted keys, floats as %.16e (17 significant digits) and
/// non-finite floats as strings.
std::string format_report(const nlohmann::json& j);

/// Runs one batch request. The report is written to config.out (or returned
/// only, when out is empty) also on failure, carrying an "error" member.
RunResult run(const RunConfig& config);

} // namespace whh
