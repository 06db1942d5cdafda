#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// Command-line front end, exposed as a library so every piece is testable
// in-process: configuration parsing and validation, the compute / verify /
// thresholds commands, and the row formatters.
//
// Output conventions shared by every command:
//   - all emitted magnitudes are the scaled quantities (the factor
//     e^{-alpha n^r} removed); the log-factor -alpha n^r is its own column so
//     downstream tools can reconstruct unscaled values in extended precision;
//   - CSV cells use full round-trip decimal formatting (17 significant
//     digits); JSON mirrors the same rows with the same key order;
//   - identical configuration produces byte-identical output.
//
// Exit codes: 0 pass, 1 assertion failure (verify), 2 configuration error,
// 3 numerical non-convergence.

namespace gpk {

struct RunConfig {
    double alpha = 1.0;
    double r = 0.5;
    double beta = 0.0;
    double p = 1.0;
    std::vector<std::uint64_t> n_list; // non-empty, strictly ascending
    double eps = 1e-16;                // kernel truncation target
    double tol = 1e-8;                 // quadrature doubling tolerance
    std::string format = "csv";        // "csv" | "json"
    std::string out_path;              // empty = stdout
    std::string suite = "all";         // verify: all | kernel | decomposition
                                       //         | lemmas | asymptotics
};

// "50,200,1000" and geometric ranges "256:4096:x4" (strictly ascending after
// expansion).  Throws std::invalid_argument on malformed input.
std::vector<std::uint64_t> parse_n_list(const std::string& text);

// Class-parameter and schema checks: n_list non-empty ascending, eps and tol
// in (0, 1), format and suite from the allowed sets.  Throws
// std::invalid_argument; runs before any computation.
void validate(const RunConfig& config);

// One asymptotic estimate attached to a compute row.
struct TermCell {
    double main = 0.0;
    double gamma = 0.0;       // extracted residual
    double gamma_bound = 0.0; // certified only when within_regime
    bool within_regime = false;
};

struct ComputeRow {
    std::uint64_t n = 0;
    double alpha = 0.0, r = 0.0, beta = 0.0, p = 0.0;
    double eps = 0.0, tol = 0.0;
    std::string status = "ok"; // "ok" or "error:<reason>"
    double log_factor = 0.0;   // -alpha n^r
    std::size_t k_count = 0;   // kernel coefficients used
    std::size_t grid_size = 0; // final quadrature grid (0 = series-only)
    std::optional<double> exact_scaled;    // dual-quadrature value
    std::optional<double> exact_p2_scaled; // closed form, p = 2 only
    std::optional<double> p2_gap;          // relative gap between the two
    std::optional<std::uint64_t> threshold_n0, threshold_n1, threshold_n2;
    // Residual extraction uses the closed form at p = 2 (exact and reachable
    // at any n) and the dual-quadrature value otherwise.
    std::optional<TermCell> window, full_line, log_form;
    std::optional<TermCell> p2_plain, p2_refined, elliptic;
};

// One row per n, in n_list order regardless of worker scheduling.  A
// non-converged quadrature is reported in that row's status, never thrown.
std::vector<ComputeRow> run_compute(const RunConfig& config);

struct VerifyRow {
    std::string check;  // stable id, e.g. "decomp.q-band"
    std::string status; // "pass" | "fail" | "skipped"
    std::optional<double> lhs, rhs; // pass means lhs <= rhs
    std::string detail;
};

// The invariant suite over the configured class: kernel closure checks, the
// power decomposition bounds, the lemma certificates, and the asymptotic
// residual windows.  Out-of-regime requests are reported "skipped", never
// failed.
std::vector<VerifyRow> run_verify(const RunConfig& config);

struct ThresholdReport {
    double alpha = 0.0, r = 0.0, p = 0.0;
    std::optional<std::uint64_t> n0, n1, n2; // empty = scan infeasible
};

ThresholdReport run_thresholds(double alpha, double r, double p);

std::string format_compute(const std::vector<ComputeRow>& rows,
                           const std::string& format);
std::string format_verify(const std::vector<VerifyRow>& rows,
                          const std::string& format);
std::string format_thresholds(const ThresholdReport& report,
                              const std::string& format);

// Full front end: parses argv (config file via --config, flags taking
// precedence; GPK_WORKERS caps the compute worker pool), dispatches, writes
// to --out or stdout, and maps outcomes to the exit codes above.
int cli_main(int argc, const char* const* argv);

} // namespace gpk
