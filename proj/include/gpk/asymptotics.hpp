#pragma once

#include "gpk/params.hpp"

#include <cstdint>

// Asymptotic main terms with certified remainder envelopes.
//
// Every estimate here has the shape
//
//     E_n e^{alpha n^r} = main + gamma * remainder_scale,
//
// where |gamma| <= gamma_bound is certified once n reaches regime_n.  The
// main terms are built from the window norm J_s(upsilon) of (t^2+1)^{-1/2}
// with upsilon = pi n^{1-r}/(alpha r), its full-line limit, the L_s norms of
// the cosine, and for p = 2 and the geometric-decay case from closed forms.
// All main terms are in the scaled representation (multiply by e^{-alpha n^r}
// to undo), and all require 0 < r < 1 except the geometric-decay cross-check,
// which lives at r = 1.

namespace gpk {

struct AsymptoticTerm {
    double main = 0.0;            // scaled main term
    double remainder_scale = 0.0; // the certified remainder is gamma * this
    double gamma_bound = 0.0;     // |gamma| bound, certified within the regime
    std::uint64_t regime_n = 0;   // smallest certified n; UINT64_MAX if the
                                  // threshold scan is out of reach
    bool within_regime = false;
};

// Window form, any p in [1, inf]: the main term carries J_s(upsilon) with
// s the conjugate exponent of p.
AsymptoticTerm main_term_window(const ClassParams& params, std::uint64_t n);

// Full-line form, p in [1, inf): J_s(upsilon) is replaced by its limit, and
// the remainder scale gains the window-truncation contribution.
AsymptoticTerm main_term_full(const ClassParams& params, std::uint64_t n);

// Logarithmic form, p = inf only: main = (4/pi^2) ln(pi n^{1-r}/(alpha r)),
// with an absolute remainder bound.
AsymptoticTerm main_term_log(const ClassParams& params, std::uint64_t n);

// p = 2 closed forms: main = n^{(1-r)/2} / sqrt(2 pi alpha r).  The plain
// variant has an additive remainder envelope; the refined variant has a
// multiplicative one with a bound just above 1.
AsymptoticTerm p2_estimate_plain(double alpha, double r, std::uint64_t n);
AsymptoticTerm p2_estimate_refined(double alpha, double r, std::uint64_t n);

// lim_n E_n e^{alpha n^r} n^{-(1-r)/p}: the coefficient of the full-line
// main term.  Requires p in [1, inf); the p = inf error grows like ln n.
double limit_constant(double alpha, double r, double p);

// Geometric decay (r = 1), p = inf: the scaled error approaches
// (8/pi^2) K(e^{-alpha}) with K the complete elliptic integral; the
// remainder envelope shrinks like 1/n.
AsymptoticTerm elliptic_crosscheck_r1(double alpha, std::uint64_t n);

// (value - main) / remainder_scale: the certified-gamma extraction shared by
// every estimate above.
double extract_gamma(double value_scaled, const AsymptoticTerm& term);

} // namespace gpk
