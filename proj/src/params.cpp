#include "gpk/params.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace gpk {
namespace {

constexpr double pi = std::numbers::pi;

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

// Scan quantity (1/(alpha r)) n^{-r} + alpha r chi(p) n^{r-1}.
double scan_plain(double alpha, double r, double chi_p, double n) {
    return std::pow(n, -r) / (alpha * r) + alpha * r * chi_p * std::pow(n, r - 1.0);
}

// Variant with the logarithm attached to the first term.
double scan_log(double alpha, double r, double n) {
    const double lead = std::pow(n, -r) / (alpha * r);
    const double arg = pi * std::pow(n, 1.0 - r) / (alpha * r);
    return lead * (1.0 + std::log(arg)) + alpha * r * std::pow(n, r - 1.0);
}

// Smallest n in [lo, ceiling] with cond(n) true.  Doubling to bracket, then
// binary search, then a local scan two steps each way: the scan quantities
// are eventually decreasing but not assumed monotone, so the bisection result
// is only trusted after its neighborhood is checked.
template <typename Cond>
std::uint64_t smallest_n(Cond cond, std::uint64_t lo, std::uint64_t ceiling) {
    std::uint64_t hi = lo;
    while (!cond(hi)) {
        if (hi >= ceiling)
            throw InfeasibleThreshold("threshold scan exceeded ceiling " +
                                      std::to_string(ceiling));
        hi = (hi > ceiling / 2) ? ceiling : hi * 2;
    }
    if (!cond(lo)) {
        std::uint64_t lo_false = lo;
        while (hi - lo_false > 1) {
            const std::uint64_t mid = lo_false + (hi - lo_false) / 2;
            if (cond(mid))
                hi = mid;
            else
                lo_false = mid;
        }
    }
    std::uint64_t best = cond(lo) ? lo : hi;
    // Local guard against a non-monotone crossover.
    const std::uint64_t from = (best > lo + 2) ? best - 2 : lo;
    for (std::uint64_t n = from; n < best; ++n)
        if (cond(n)) { best = n; break; }
    return best;
}

} // namespace

void validate(const ClassParams& params) {
    require(std::isfinite(params.alpha) && params.alpha > 0.0, "alpha must be > 0");
    require(std::isfinite(params.r) && params.r > 0.0 && params.r <= 1.0,
            "r must be in (0, 1]");
    require(std::isfinite(params.beta), "beta must be finite");
    require(params.p >= 1.0, "p must be >= 1");
}

double conjugate_exponent(double p) {
    require(p >= 1.0, "p must be >= 1");
    if (p == 1.0) return inf;
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
}

double chi(double p) {
    require(p >= 1.0, "p must be >= 1");
    return std::isinf(p) ? 1.0 : p;
}

std::uint64_t threshold_n0(double alpha, double r, double p, std::uint64_t ceiling) {
    require(alpha > 0.0 && std::isfinite(alpha), "alpha must be > 0");
    require(r > 0.0 && r < 1.0, "r must be in (0, 1)");
    require(p >= 1.0, "p must be >= 1");
    const double cube = std::pow(3.0 * pi, 3.0);
    double margin;
    if (p == 1.0)
        margin = 1.0 / 14.0;
    else if (std::isinf(p))
        margin = 1.0 / cube;
    else
        margin = (p - 1.0) / (p * cube);
    const double chi_p = chi(p);
    return smallest_n(
        [&](std::uint64_t n) {
            return scan_plain(alpha, r, chi_p, static_cast<double>(n)) <= margin;
        },
        1, ceiling);
}

std::uint64_t threshold_n1(double alpha, double r, std::uint64_t ceiling) {
    require(alpha > 0.0 && std::isfinite(alpha), "alpha must be > 0");
    require(r > 0.0 && r < 1.0, "r must be in (0, 1)");
    const double margin = 1.0 / std::pow(3.0 * pi, 3.0);
    return smallest_n(
        [&](std::uint64_t n) {
            return scan_log(alpha, r, static_cast<double>(n)) <= margin;
        },
        2, ceiling);
}

std::uint64_t threshold_n2(double alpha, double r, double p, std::uint64_t ceiling) {
    require(alpha > 0.0 && std::isfinite(alpha), "alpha must be > 0");
    require(r > 0.0 && r < 1.0, "r must be in (0, 1)");
    require(p >= 1.0, "p must be >= 1");
    const double chi_p = chi(p);
    return smallest_n(
        [&](std::uint64_t n) {
            return scan_plain(alpha, r, chi_p, static_cast<double>(n)) <= 1.0 / 14.0;
        },
        1, ceiling);
}

} // namespace gpk
