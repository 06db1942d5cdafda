#pragma once

#include "gpk/kernel.hpp"
#include "gpk/params.hpp"

#include <cstdint>
#include <vector>

// Exact uniform-approximation error via the dual best-constant problem.
//
// For class parameters (alpha, r, beta, p) the error of the degree-(n-1)
// partial sum over the whole class equals
//
//     E_n = (1/pi) inf_lambda || f - lambda ||_{L_s[0, 2 pi]},
//
// where s is the conjugate exponent of p and f is the demodulated real
// kernel section f(t) = sum_k c_k cos((k+n) t - beta pi/2) in the scaled
// representation.  Each s gets a dedicated path that removes every source
// of discretization error:
//
//   s = 2        lambda = 0 and the uniform grid rule is exact for the
//                band-limited |f|^2 once the grid exceeds twice the top
//                frequency, so the value is exact to rounding.
//   s = infinity lambda is the midrange; grid extrema are polished to
//                machine precision by local maximization of the series.
//   s = 1        lambda is the measure-theoretic median, pinned by Newton
//                iteration on measure{f < lambda}; the integral then
//                telescopes through the antiderivative series between the
//                refined sign changes, with no quadrature at all.
//   other s      lambda minimizes the exact integral, evaluated piecewise
//                between refined sign changes by tanh-sinh quadrature and
//                minimized by Brent's method.
//
// All paths except s = 2 re-run on a doubled grid and report the relative
// discrepancy; s = 2 is exact by the band-limit argument and reports zero.

namespace gpk {

// Discrete L_s norm (2 pi / N sum |v_j|^s)^{1/s} of uniform samples over a
// period; s = infinity gives max |v_j|.  Requires s >= 1 and nonempty input.
double lp_norm_grid(const std::vector<double>& values, double s);

struct BestConstantResult {
    double lambda = 0.0; // minimizing constant
    double value = 0.0;  // lp_norm_grid(v - lambda, s) at the minimum
};

// Minimizes the discrete L_s norm of (v - lambda) over lambda: midrange for
// s = infinity, mean for s = 2, median for s = 1, golden-section otherwise.
BestConstantResult best_constant(const std::vector<double>& values, double s);

struct ExactEnConfig {
    double eps = 1e-16;           // kernel truncation target
    double tol = 1e-8;            // doubling-stability tolerance
    std::size_t grid_override = 0; // 0 = automatic sizing
};

struct ExactErrorResult {
    double value_scaled = 0.0;  // E_n times e^{+alpha n^r}
    double log_factor = 0.0;    // -alpha n^r; unscaled = value_scaled e^{log_factor}
    double lambda = 0.0;        // optimal constant (scaled)
    std::uint64_t n = 0;
    std::size_t k_count = 0;    // kernel coefficients used
    std::size_t grid_size = 0;  // final grid (0 for the series-only path)
    double doubling_delta = 0.0;
    bool converged = false;
};

// The full dual computation for any admissible parameter set.  Throws
// NonConvergence if grid doubling fails to stabilize within config.tol.
ExactErrorResult exact_en(const ClassParams& params, std::uint64_t n,
                          const ExactEnConfig& config = {});

// Series-only evaluation for p = 2 (any beta): the error equals
// (1/sqrt(pi)) (sum_k c_k^2)^{1/2} in the scaled representation, by the
// orthogonality of the cosine frequencies.  Handles n far beyond grid reach.
ExactErrorResult exact_en_p2(double alpha, double r, std::uint64_t n);

} // namespace gpk
