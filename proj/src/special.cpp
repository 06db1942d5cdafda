#include "gpk/special.hpp"

#include "gpk/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gpk {
namespace {

constexpr double pi = std::numbers::pi;
constexpr double dinf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

template <typename F>
double kronrod(F f, double a, double b, double tol) {
    double error = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, 12, tol, &error);
    if (!std::isfinite(value))
        throw NonConvergence("quadrature produced a non-finite value");
    return value;
}

} // namespace

double j_s(double upsilon, double s) {
    require(upsilon >= 0.0, "upsilon must be >= 0");
    require(s >= 1.0, "s must be >= 1");
    if (std::isinf(s)) return upsilon > 0.0 ? 1.0 : 0.0;
    if (s == 1.0) return std::asinh(upsilon);
    if (s == 2.0) return std::sqrt(std::atan(upsilon));
    if (upsilon == 0.0) return 0.0;
    const double integral = kronrod(
        [s](double t) { return std::pow(t * t + 1.0, -0.5 * s); }, 0.0, upsilon, 1e-13);
    return std::pow(integral, 1.0 / s);
}

double j_s_full_line(double s) {
    require(s > 1.0 && std::isfinite(s), "s must satisfy 1 < s < inf");
    // integral_0^inf (t^2+1)^{-s/2} dt = (sqrt(pi)/2) Gamma((s-1)/2) / Gamma(s/2)
    const double integral =
        0.5 * std::sqrt(pi) *
        std::exp(std::lgamma(0.5 * (s - 1.0)) - std::lgamma(0.5 * s));
    return std::pow(integral, 1.0 / s);
}

double tail_integral(double gamma, double r, double delta, double m, bool scaled) {
    require(gamma > 0.0 && std::isfinite(gamma), "gamma must be > 0");
    require(r > 0.0 && std::isfinite(r), "r must be > 0");
    require(m >= 1.0 && std::isfinite(m), "m must be >= 1");
    require(std::isfinite(delta), "delta must be finite");
    // Substitute q = gamma (t^r - m^r); with x = gamma m^r,
    //   t(q) = m exp(log1p(q/x)/r),  dt = t dq / (r (x + q)),
    // so the scaled integral is  integral_0^inf e^{-q} t(q)^{delta+1} / (r (x+q)) dq.
    // The non-exponential factor grows like (q/x)^{(delta+1)/r - 1}, so the
    // integrand peaks no later than q ~ (delta+1)/r; the cut keeps the
    // relative tail below e^{-60}.
    const double x = gamma * std::pow(m, r);
    const double log_m = std::log(m);
    auto integrand = [&](double q) {
        const double log_t = log_m + std::log1p(q / x) / r;
        return std::exp(-q + (delta + 1.0) * log_t) / (r * (x + q));
    };
    const double nu = std::max(0.0, (delta + 1.0) / r - 1.0);
    const double q_end = nu + 12.0 * std::sqrt(nu + 1.0) + 70.0;
    const double value = kronrod(integrand, 0.0, q_end, 1e-13);
    if (scaled) return value;
    // e^{-x} underflows to zero for x beyond the double range; the scaled
    // variant is the meaningful quantity there.
    return value * std::exp(-x);
}

TailEstimate tail_estimate(double gamma, double r, double delta, double m) {
    const double e = delta + 1.0 - r;
    TailEstimate out;
    out.main_term_scaled = std::pow(m, e) / (gamma * r);
    out.value_scaled = tail_integral(gamma, r, delta, m, /*scaled=*/true);
    if (e == 0.0) {
        out.theta = 0.0;
        out.admissible = true;
        return out;
    }
    out.admissible = m >= std::pow(14.0 * std::abs(e) / (gamma * r), 1.0 / r);
    out.theta = (out.value_scaled / out.main_term_scaled - 1.0) *
                (gamma * r / std::abs(e)) * std::pow(m, r);
    return out;
}

double elliptic_k(double q) {
    require(q >= 0.0 && q < 1.0, "q must be in [0, 1)");
    double a = 1.0;
    double b = std::sqrt((1.0 - q) * (1.0 + q));
    // Quadratic convergence puts the mean pair within one ulp in well under
    // ten rounds; the cap guards against the terminal one-ulp cycle the
    // rounded iteration can fall into instead of landing exactly equal.
    for (int round = 0;
         round < 40 && std::abs(a - b) >
                           std::numeric_limits<double>::epsilon() * a;
         ++round) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return pi / (2.0 * a);
}

double generalized_k(double p_prime, double q) {
    require(p_prime >= 1.0 && std::isfinite(p_prime), "p' must be in [1, inf)");
    require(q >= 0.0 && q < 1.0, "q must be in [0, 1)");
    // Periodic uniform rule on [0, 2pi), doubled until stable: the integrand
    // (1 - 2q cos t + q^2)^{-p'/2} is analytic and periodic, so the rule
    // converges geometrically with rate |ln q|.
    auto level = [&](int n_nodes) {
        double sum = 0.0;
        const double h = 2.0 * pi / n_nodes;
        for (int j = 0; j < n_nodes; ++j) {
            const double t = h * j;
            const double den = 1.0 - 2.0 * q * std::cos(t) + q * q;
            sum += std::pow(den, -0.5 * p_prime);
        }
        return sum * h;
    };
    int n_nodes = 256;
    double prev = level(n_nodes);
    for (;;) {
        n_nodes *= 2;
        const double cur = level(n_nodes);
        if (std::abs(cur - prev) <= 1e-12 * std::abs(cur)) {
            const double norm = std::pow(cur, 1.0 / p_prime);
            return std::pow(2.0, -(1.0 + 1.0 / p_prime)) * norm;
        }
        prev = cur;
        if (n_nodes > (1 << 22))
            throw NonConvergence("generalized_k: periodic rule did not stabilize");
    }
}

double cos_lp_norm(double s) {
    require(s >= 1.0, "s must be >= 1");
    if (std::isinf(s)) return 1.0;
    if (s == 1.0) return 4.0;
    if (s == 2.0) return std::sqrt(pi);
    // (4 integral_0^{pi/2} cos^s t dt)^{1/s}; tanh-sinh absorbs the endpoint
    // zero of fractional order at t = pi/2.
    boost::math::quadrature::tanh_sinh<double> ts;
    const double integral =
        ts.integrate([s](double t) { return std::pow(std::cos(t), s); }, 0.0, 0.5 * pi,
                     1e-13);
    return std::pow(4.0 * integral, 1.0 / s);
}

} // namespace gpk
