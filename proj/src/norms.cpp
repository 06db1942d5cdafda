#include "gpk/norms.hpp"

#include "gpk/errors.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gpk {
namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * pi;

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

double node_at(std::size_t j, std::size_t n_nodes) {
    return -pi + two_pi * static_cast<double>(j) / static_cast<double>(n_nodes);
}

// Demodulated real samples f_j = Re[ P(t_j) e^{i(n t_j - beta pi/2)} ].
std::vector<double> real_form_grid(const ScaledKernel& kernel, double beta,
                                   std::size_t n_nodes) {
    const auto grid = kernel_grid_eval(kernel, n_nodes);
    const double nn = static_cast<double>(kernel.n);
    std::vector<double> f(n_nodes);
    for (std::size_t j = 0; j < n_nodes; ++j) {
        const double phase = nn * grid.node(j) - beta * pi / 2.0;
        f[j] = std::real(grid.values[j] * std::polar(1.0, phase));
    }
    return f;
}

struct PathResult {
    double norm = 0.0;   // || f - lambda ||_{L_s[0, 2 pi]}
    double lambda = 0.0;
};

// ---- s = 2: the uniform rule is exact for band-limited |f - mean|^2 ----

PathResult compute_s2(const std::vector<double>& f) {
    const std::size_t n_nodes = f.size();
    double mean = 0.0;
    for (double v : f) mean += v;
    mean /= static_cast<double>(n_nodes);
    double sumsq = 0.0;
    for (double v : f) sumsq += (v - mean) * (v - mean);
    return {std::sqrt(two_pi * sumsq / static_cast<double>(n_nodes)), mean};
}

// ---- s = infinity: polish the grid extrema against the series ----

PathResult compute_sup(const ScaledKernel& kernel, double beta,
                       const std::vector<double>& f) {
    const std::size_t n_nodes = f.size();
    const double h = two_pi / static_cast<double>(n_nodes);
    const auto [imin, imax] = std::minmax_element(f.begin(), f.end());
    const double grid_min = *imin, grid_max = *imax;
    const double slack = 5e-3 * (grid_max - grid_min);

    auto polish = [&](double sign) {
        const double target = (sign > 0) ? grid_max : grid_min;
        double best = target * sign;
        int refined = 0;
        for (std::size_t j = 0; j < n_nodes && refined < 64; ++j) {
            const double prev = f[(j + n_nodes - 1) % n_nodes];
            const double next = f[(j + 1) % n_nodes];
            const bool local =
                (sign > 0) ? (f[j] >= prev && f[j] >= next && f[j] >= target - slack)
                           : (f[j] <= prev && f[j] <= next && f[j] <= target + slack);
            if (!local) continue;
            ++refined;
            const double t0 = node_at(j, n_nodes);
            auto neg = [&](double t) {
                return -sign * kernel_real_form(kernel, beta, t);
            };
            const auto res =
                boost::math::tools::brent_find_minima(neg, t0 - h, t0 + h, 26);
            best = std::max(best, -res.second);
        }
        return sign * best;
    };

    const double sup = polish(+1.0);
    const double inf = polish(-1.0);
    return {(sup - inf) / 2.0, (sup + inf) / 2.0};
}

// ---- sign-change refinement shared by the s = 1 and general-s paths ----

struct ZeroSet {
    std::vector<double> z;     // ascending positions in [-pi, pi + h)
    std::vector<double> deriv; // f'(z_i); its sign gives f - lambda after z_i
};

ZeroSet refine_zeros(const ScaledKernel& kernel, double beta,
                     const std::vector<double>& f, double lambda) {
    const std::size_t n_nodes = f.size();
    const double h = two_pi / static_cast<double>(n_nodes);
    ZeroSet out;
    boost::math::tools::eps_tolerance<double> tol(60);
    auto g = [&](double t) { return kernel_real_form(kernel, beta, t) - lambda; };
    for (std::size_t j = 0; j < n_nodes; ++j) {
        const double ga = f[j] - lambda;
        const double gb = f[(j + 1) % n_nodes] - lambda;
        if (!(ga * gb < 0.0)) continue; // exact node zeros are nudged by callers
        const double a = node_at(j, n_nodes);
        std::uintmax_t max_iter = 200;
        const auto bracket =
            boost::math::tools::toms748_solve(g, a, a + h, ga, gb, tol, max_iter);
        const double z = 0.5 * (bracket.first + bracket.second);
        out.z.push_back(z);
        out.deriv.push_back(kernel_real_deriv(kernel, beta, z));
    }
    if (out.z.size() < 2 || out.z.size() % 2 != 0)
        throw NonConvergence("sign-change scan produced a degenerate crossing set");
    return out;
}

// Nudges lambda clear of the grid samples.  The clearance must exceed the
// transform's rounding noise, or a bracket endpoint sign taken from the grid
// could disagree with the direct series the refiner evaluates.
double nudge_off_nodes(const std::vector<double>& f, double lambda, double range) {
    const double clearance = 1e-11 * std::max(range, 1e-300);
    for (int attempt = 0; attempt < 60; ++attempt) {
        bool clean = true;
        for (double v : f)
            if (std::abs(v - lambda) <= clearance) { clean = false; break; }
        if (clean) return lambda;
        lambda += 3.0 * clearance;
    }
    throw NonConvergence("could not separate lambda from the grid samples");
}

// ---- s = 1: median by Newton on the level measure, then a telescoping
//      integral through the antiderivative series ----

PathResult compute_s1(const ScaledKernel& kernel, double beta,
                      const std::vector<double>& f) {
    const double range = *std::max_element(f.begin(), f.end()) -
                         *std::min_element(f.begin(), f.end());
    std::vector<double> sorted(f);
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2,
                     sorted.end());
    double lambda = sorted[sorted.size() / 2];

    ZeroSet zeros;
    bool pinned = false;
    for (int iter = 0; iter < 30; ++iter) {
        lambda = nudge_off_nodes(f, lambda, range);
        zeros = refine_zeros(kernel, beta, f, lambda);
        double below = 0.0, slope = 0.0;
        const std::size_t m = zeros.z.size();
        for (std::size_t i = 0; i < m; ++i) {
            const double zr = (i + 1 < m) ? zeros.z[i + 1] : zeros.z[0] + two_pi;
            if (zeros.deriv[i] < 0.0) below += zr - zeros.z[i];
            slope += 1.0 / std::abs(zeros.deriv[i]);
        }
        if (!std::isfinite(slope) || slope <= 0.0)
            throw NonConvergence("median refinement hit a flat crossing");
        // The norm is quadratically flat in lambda at the optimum, so this
        // residual leaves no visible trace in the value; it must stay above
        // the node-clearance displacement of nudge_off_nodes.
        const double defect = below - pi;
        if (std::abs(defect) < 1e-9) { pinned = true; break; }
        lambda -= defect / slope;
    }
    if (!pinned)
        throw NonConvergence("level-measure iteration did not settle");

    double total = 0.0;
    const std::size_t m = zeros.z.size();
    for (std::size_t i = 0; i < m; ++i) {
        const double zl = zeros.z[i];
        const double zr = (i + 1 < m) ? zeros.z[i + 1] : zeros.z[0] + two_pi;
        const double seg = kernel_real_antideriv(kernel, beta, zr) -
                           kernel_real_antideriv(kernel, beta, zl) -
                           lambda * (zr - zl);
        total += (zeros.deriv[i] > 0.0) ? seg : -seg;
    }
    return {total, lambda};
}

// ---- general s: bracketed root of the subgradient, piecewise tanh-sinh ----

PathResult compute_general(const ScaledKernel& kernel, double beta,
                           const std::vector<double>& f, double s) {
    const double fmin = *std::min_element(f.begin(), f.end());
    const double fmax = *std::max_element(f.begin(), f.end());
    const double range = fmax - fmin;
    const double scale = std::max(range, 1e-300);

    auto& ts = []() -> boost::math::quadrature::tanh_sinh<double>& {
        static thread_local boost::math::quadrature::tanh_sinh<double> q(12);
        return q;
    }();

    // Signed piecewise integral of |(f - lambda)/scale|^power: pieces where
    // f < lambda count positive, pieces where f > lambda count negative when
    // signed, and everything counts positive otherwise.
    auto piecewise = [&](double lambda, double power, bool signed_sum) {
        const ZeroSet zeros = refine_zeros(kernel, beta, f, lambda);
        const std::size_t m = zeros.z.size();
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double zl = zeros.z[i];
            const double zr = (i + 1 < m) ? zeros.z[i + 1] : zeros.z[0] + two_pi;
            auto integrand = [&](double t) {
                const double g =
                    (kernel_real_form(kernel, beta, t) - lambda) / scale;
                return std::pow(std::abs(g), power);
            };
            const double piece = ts.integrate(integrand, zl, zr, 1e-10);
            const double sign =
                signed_sum ? ((zeros.deriv[i] > 0.0) ? -1.0 : 1.0) : 1.0;
            acc += sign * piece;
        }
        return acc;
    };

    BestConstantResult start = best_constant(f, s);
    const double center = nudge_off_nodes(f, start.lambda, range);
    // The optimum is strictly interior to [min f, max f]; clamp the bracket
    // so every subgradient evaluation still sees sign changes to refine.
    const double lo = fmin + 1e-12 * range, hi = fmax - 1e-12 * range;
    double w = std::max(1e-3 * range, 1e-12);
    auto subgrad = [&](double lambda) {
        return piecewise(nudge_off_nodes(f, lambda, range), s - 1.0, true);
    };
    double a = std::clamp(center - w, lo, hi);
    double b = std::clamp(center + w, lo, hi);
    double da = subgrad(a), db = subgrad(b);
    int guard = 0;
    while (!(da <= 0.0 && db >= 0.0)) {
        if (++guard > 60)
            throw NonConvergence("could not bracket the optimal constant");
        w *= 2.0;
        a = std::clamp(center - w, lo, hi);
        b = std::clamp(center + w, lo, hi);
        da = subgrad(a);
        db = subgrad(b);
    }
    double lambda;
    if (da == 0.0) {
        lambda = a;
    } else if (db == 0.0) {
        lambda = b;
    } else {
        boost::math::tools::eps_tolerance<double> tol(40);
        std::uintmax_t max_iter = 120;
        const auto bracket = boost::math::tools::toms748_solve(subgrad, a, b, da,
                                                               db, tol, max_iter);
        lambda = 0.5 * (bracket.first + bracket.second);
    }

    const double j_norm = piecewise(nudge_off_nodes(f, lambda, range), s, false);
    return {scale * std::pow(j_norm, 1.0 / s), lambda};
}

PathResult compute_path(const ScaledKernel& kernel, double beta, double s,
                        std::size_t n_nodes) {
    const std::vector<double> f = real_form_grid(kernel, beta, n_nodes);
    if (s == 2.0) return compute_s2(f);
    if (std::isinf(s)) return compute_sup(kernel, beta, f);
    if (s == 1.0) return compute_s1(kernel, beta, f);
    return compute_general(kernel, beta, f, s);
}

} // namespace

double lp_norm_grid(const std::vector<double>& values, double s) {
    require(!values.empty(), "norm of an empty sample set");
    require(s >= 1.0, "s must be >= 1");
    double vmax = 0.0;
    for (double v : values) vmax = std::max(vmax, std::abs(v));
    if (std::isinf(s) || vmax == 0.0) return vmax;
    double acc = 0.0;
    for (double v : values) acc += std::pow(std::abs(v) / vmax, s);
    return vmax * std::pow(two_pi * acc / static_cast<double>(values.size()),
                           1.0 / s);
}

BestConstantResult best_constant(const std::vector<double>& values, double s) {
    require(!values.empty(), "best constant of an empty sample set");
    require(s >= 1.0, "s must be >= 1");
    const auto [imin, imax] = std::minmax_element(values.begin(), values.end());
    const double vmin = *imin, vmax = *imax;
    BestConstantResult out;
    if (vmin == vmax) {
        out.lambda = vmin;
        out.value = 0.0;
        return out;
    }
    if (std::isinf(s)) {
        out.lambda = (vmin + vmax) / 2.0;
        out.value = (vmax - vmin) / 2.0;
        return out;
    }
    if (s == 2.0) {
        double mean = 0.0;
        for (double v : values) mean += v;
        out.lambda = mean / static_cast<double>(values.size());
    } else if (s == 1.0) {
        std::vector<double> sorted(values);
        const std::size_t half = sorted.size() / 2;
        std::nth_element(sorted.begin(), sorted.begin() + half, sorted.end());
        const double upper = sorted[half];
        if (sorted.size() % 2 == 0) {
            const double lower =
                *std::max_element(sorted.begin(), sorted.begin() + half);
            out.lambda = (lower + upper) / 2.0;
        } else {
            out.lambda = upper;
        }
    } else {
        // Golden-section on the convex discrete objective.
        const double scale = std::max(std::abs(vmin), std::abs(vmax));
        auto objective = [&](double lambda) {
            double acc = 0.0;
            for (double v : values)
                acc += std::pow(std::abs(v - lambda) / scale, s);
            return acc;
        };
        const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = vmin, b = vmax;
        double c = b - invphi * (b - a), d = a + invphi * (b - a);
        double fc = objective(c), fd = objective(d);
        while (b - a > 1e-12 * (vmax - vmin)) {
            if (fc < fd) {
                b = d; d = c; fd = fc;
                c = b - invphi * (b - a);
                fc = objective(c);
            } else {
                a = c; c = d; fc = fd;
                d = a + invphi * (b - a);
                fd = objective(d);
            }
        }
        out.lambda = (a + b) / 2.0;
    }
    std::vector<double> residual(values);
    for (double& v : residual) v -= out.lambda;
    out.value = lp_norm_grid(residual, s);
    return out;
}

ExactErrorResult exact_en(const ClassParams& params, std::uint64_t n,
                          const ExactEnConfig& config) {
    validate(params);
    require(n >= 1, "n must be >= 1");
    require(config.tol > 0.0 && config.tol <= 0.1, "tol must be in (0, 0.1]");
    const double s = conjugate_exponent(params.p);
    const ScaledKernel kernel =
        build_scaled_kernel(params.alpha, params.r, n, config.eps);

    ExactErrorResult out;
    out.n = n;
    out.k_count = kernel.k_count();
    out.log_factor =
        -params.alpha * std::pow(static_cast<double>(n), params.r);

    std::size_t n_nodes = (config.grid_override != 0)
                              ? config.grid_override
                              : default_grid_size(kernel, true);
    // The squared section is band-limited to 2 (n + K); keep the uniform
    // rule strictly above that so the s = 2 path is exact, and every other
    // path enjoys the same resolution.
    while (n_nodes <= 2 * (static_cast<std::size_t>(n) + kernel.k_count()))
        n_nodes <<= 1;
    if (n_nodes > (std::size_t{1} << 22))
        throw NonConvergence(
            "required grid size exceeds the cap; use the p = 2 series path");

    const PathResult first = compute_path(kernel, params.beta, s, n_nodes);
    if (s == 2.0) {
        out.value_scaled = first.norm / pi;
        out.lambda = first.lambda;
        out.grid_size = n_nodes;
        out.doubling_delta = 0.0;
        out.converged = true;
        return out;
    }
    PathResult prev = first;
    std::size_t nodes = n_nodes;
    for (int stage = 0; stage < 2; ++stage) {
        const PathResult next =
            compute_path(kernel, params.beta, s, nodes * 2);
        const double delta = std::abs(next.norm - prev.norm) /
                             std::max(std::abs(next.norm), 1e-300);
        nodes *= 2;
        if (delta <= config.tol) {
            out.value_scaled = next.norm / pi;
            out.lambda = next.lambda;
            out.grid_size = nodes;
            out.doubling_delta = delta;
            out.converged = true;
            return out;
        }
        prev = next;
    }
    throw NonConvergence("grid doubling failed to stabilize the norm");
}

ExactErrorResult exact_en_p2(double alpha, double r, std::uint64_t n) {
    const ScaledKernel kernel = build_scaled_kernel(alpha, r, n);
    double sumsq = 0.0;
    for (std::size_t k = kernel.coeffs.size(); k-- > 0;)
        sumsq += kernel.coeffs[k] * kernel.coeffs[k];
    ExactErrorResult out;
    out.value_scaled = std::sqrt(sumsq / pi);
    out.log_factor = -alpha * std::pow(static_cast<double>(n), r);
    out.lambda = 0.0;
    out.n = n;
    out.k_count = kernel.k_count();
    out.grid_size = 0;
    out.doubling_delta = 0.0;
    out.converged = true;
    return out;
}

} // namespace gpk
