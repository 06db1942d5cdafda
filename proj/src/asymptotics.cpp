#include "gpk/asymptotics.hpp"

#include "gpk/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gpk {
namespace {

constexpr double pi = std::numbers::pi;
constexpr std::uint64_t regime_unknown =
    std::numeric_limits<std::uint64_t>::max();

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

void check_interior_r(const ClassParams& params) {
    validate(params);
    require(params.r < 1.0, "asymptotic forms require r < 1");
}

double upsilon_of(double alpha, double r, double n) {
    return pi * std::pow(n, 1.0 - r) / (alpha * r);
}

std::uint64_t regime_start_n0(double alpha, double r, double p) {
    try {
        return threshold_n0(alpha, r, p);
    } catch (const InfeasibleThreshold&) {
        return regime_unknown;
    }
}

std::uint64_t regime_start_n1(double alpha, double r) {
    try {
        return threshold_n1(alpha, r);
    } catch (const InfeasibleThreshold&) {
        return regime_unknown;
    }
}

void stamp_regime(AsymptoticTerm& term, std::uint64_t start, std::uint64_t n) {
    term.regime_n = start;
    term.within_regime = (start != regime_unknown) && n >= start;
}

// Main coefficient shared by the window and full-line forms:
// n^{(1-r)/p} ||cos||_s j / (pi^{1+1/s} (alpha r)^{1/p}), with s conjugate
// to p and j the window or full-line norm of (t^2+1)^{-1/2}.
double main_shape(double alpha, double r, double p, double n, double j_value) {
    const double s = conjugate_exponent(p);
    const double a = alpha * r;
    return std::pow(n, (1.0 - r) / p) * cos_lp_norm(s) * j_value /
           (std::pow(pi, 1.0 + 1.0 / s) * std::pow(a, 1.0 / p));
}

} // namespace

AsymptoticTerm main_term_window(const ClassParams& params, std::uint64_t n) {
    check_interior_r(params);
    require(n >= 1, "n must be >= 1");
    const double nn = static_cast<double>(n);
    const double a = params.alpha * params.r;
    const double s = conjugate_exponent(params.p);
    const double ups = upsilon_of(params.alpha, params.r, nn);
    const double j = j_s(ups, s);

    AsymptoticTerm out;
    out.main = main_shape(params.alpha, params.r, params.p, nn, j);
    out.remainder_scale =
        std::pow(nn, (1.0 - params.r) / params.p) *
        (std::pow(a, -1.0 - 1.0 / params.p) * j * std::pow(nn, -params.r) +
         std::pow(nn, -(1.0 - params.r) / params.p));
    out.gamma_bound = (14.0 * pi) * (14.0 * pi);
    stamp_regime(out, regime_start_n0(params.alpha, params.r, params.p), n);
    return out;
}

AsymptoticTerm main_term_full(const ClassParams& params, std::uint64_t n) {
    check_interior_r(params);
    require(n >= 1, "n must be >= 1");
    require(std::isfinite(params.p), "the full-line form requires p < inf");
    const double nn = static_cast<double>(n);
    const double a = params.alpha * params.r;
    const double p = params.p;

    AsymptoticTerm out;
    double j_full;
    double truncation_piece;
    if (p == 1.0) {
        // s = inf: the window and full-line norms coincide at 1, and the
        // truncation contribution vanishes.
        j_full = 1.0;
        truncation_piece = 0.0;
    } else {
        const double s = conjugate_exponent(p);
        j_full = j_s_full_line(s);
        truncation_piece = (1.0 / (s - 1.0)) * std::pow(a, (s - 1.0) / p) *
                           std::pow(nn, -(1.0 - params.r) * (s - 1.0));
    }
    const double s = conjugate_exponent(p);
    out.main = main_shape(params.alpha, params.r, p, nn, j_full);
    out.remainder_scale =
        std::pow(nn, (1.0 - params.r) / p) *
        (truncation_piece +
         std::pow(p, 1.0 / s) * std::pow(a, -1.0 - 1.0 / p) *
             std::pow(nn, -params.r) +
         std::pow(nn, -(1.0 - params.r) / p));
    out.gamma_bound = (14.0 * pi) * (14.0 * pi);
    stamp_regime(out, regime_start_n0(params.alpha, params.r, params.p), n);
    return out;
}

AsymptoticTerm main_term_log(const ClassParams& params, std::uint64_t n) {
    check_interior_r(params);
    require(n >= 1, "n must be >= 1");
    require(std::isinf(params.p), "the logarithmic form requires p = inf");
    const double nn = static_cast<double>(n);

    AsymptoticTerm out;
    out.main =
        (4.0 / (pi * pi)) * std::log(upsilon_of(params.alpha, params.r, nn));
    out.remainder_scale = 1.0;
    out.gamma_bound = 20.0 * pi * pi * pi * pi;
    stamp_regime(out, regime_start_n1(params.alpha, params.r), n);
    return out;
}

AsymptoticTerm p2_estimate_plain(double alpha, double r, std::uint64_t n) {
    ClassParams params;
    params.alpha = alpha;
    params.r = r;
    params.p = 2.0;
    check_interior_r(params);
    require(n >= 1, "n must be >= 1");
    const double nn = static_cast<double>(n);
    const double a = alpha * r;

    AsymptoticTerm out;
    out.main = std::pow(nn, (1.0 - r) / 2.0) / std::sqrt(2.0 * pi * a);
    out.remainder_scale =
        std::pow(nn, (1.0 - r) / 2.0) *
        ((1.0 / a) * std::pow(nn, -r) +
         std::sqrt(a) * std::pow(nn, -(1.0 - r) / 2.0));
    out.gamma_bound = 392.0 * std::pow(pi, 2.5);
    stamp_regime(out, regime_start_n0(alpha, r, 2.0), n);
    return out;
}

AsymptoticTerm p2_estimate_refined(double alpha, double r, std::uint64_t n) {
    ClassParams params;
    params.alpha = alpha;
    params.r = r;
    params.p = 2.0;
    check_interior_r(params);
    require(n >= 1, "n must be >= 1");
    const double nn = static_cast<double>(n);
    const double a = alpha * r;

    AsymptoticTerm out;
    out.main = std::pow(nn, (1.0 - r) / 2.0) / std::sqrt(2.0 * pi * a);
    // Multiplicative envelope: value = main (1 + gamma [...]), expressed as
    // an additive scale of main * [...] so the extraction stays uniform.
    out.remainder_scale =
        out.main * ((1.0 / (2.0 * a)) * std::pow(nn, -r) +
                    a * std::pow(nn, -(1.0 - r)));
    const double c = 54.0 * pi * pi * pi;
    out.gamma_bound = std::sqrt(c / (c - 1.0));
    stamp_regime(out, regime_start_n0(alpha, r, 2.0), n);
    return out;
}

double limit_constant(double alpha, double r, double p) {
    ClassParams params;
    params.alpha = alpha;
    params.r = r;
    params.p = p;
    check_interior_r(params);
    require(std::isfinite(p), "the limit constant requires p < inf");
    const double a = alpha * r;
    if (p == 1.0) return 1.0 / (pi * a);
    const double s = conjugate_exponent(p);
    return cos_lp_norm(s) * j_s_full_line(s) /
           (std::pow(pi, 1.0 + 1.0 / s) * std::pow(a, 1.0 / p));
}

AsymptoticTerm elliptic_crosscheck_r1(double alpha, std::uint64_t n) {
    require(std::isfinite(alpha) && alpha > 0.0, "alpha must be > 0");
    require(n >= 1, "n must be >= 1");
    const double q = std::exp(-alpha);

    AsymptoticTerm out;
    out.main = (8.0 / (pi * pi)) * elliptic_k(q);
    out.remainder_scale =
        out.main * (10.0 * q) / ((1.0 - q) * static_cast<double>(n));
    out.gamma_bound = 1.0;
    out.regime_n = 1;
    out.within_regime = true;
    return out;
}

double extract_gamma(double value_scaled, const AsymptoticTerm& term) {
    return (value_scaled - term.main) / term.remainder_scale;
}

} // namespace gpk
