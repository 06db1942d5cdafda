#include "doctest.h"

#include "gpk/errors.hpp"
#include "gpk/kernel.hpp"
#include "gpk/norms.hpp"
#include "gpk/params.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace {

constexpr double pi = std::numbers::pi;

// Fully naive evaluation of the demodulated section: one std::cos per term,
// no recurrences, no transforms.  This is the reference the exact paths are
// judged against.
double naive_f(const gpk::ScaledKernel& kernel, double beta, double t) {
    double acc = 0.0;
    const double nn = static_cast<double>(kernel.n);
    for (std::size_t k = 0; k < kernel.k_count(); ++k)
        acc += kernel.coeffs[k] * std::cos((nn + static_cast<double>(k)) * t -
                                           beta * pi / 2.0);
    return acc;
}

std::vector<double> naive_samples(const gpk::ScaledKernel& kernel, double beta,
                                  std::size_t count) {
    std::vector<double> f(count);
    for (std::size_t j = 0; j < count; ++j) {
        const double t =
            -pi + 2.0 * pi * static_cast<double>(j) / static_cast<double>(count);
        f[j] = naive_f(kernel, beta, t);
    }
    return f;
}

// Two rounds of three-point parabolic refinement around a sampled extremum.
double refine_extremum(const gpk::ScaledKernel& kernel, double beta, double t0,
                       double h, double sign) {
    double best = sign * naive_f(kernel, beta, t0);
    for (int round = 0; round < 2; ++round) {
        const double fm = sign * naive_f(kernel, beta, t0 - h);
        const double fc = sign * naive_f(kernel, beta, t0);
        const double fp = sign * naive_f(kernel, beta, t0 + h);
        const double denom = fm - 2.0 * fc + fp;
        if (denom != 0.0) t0 += 0.5 * h * (fm - fp) / denom;
        h /= 16.0;
        best = std::max({best, fm, fc, fp, sign * naive_f(kernel, beta, t0)});
    }
    return sign * best;
}

// Machine-accurate sign changes of f - lambda from a dense sample sweep.
std::vector<double> bisected_zeros(const gpk::ScaledKernel& kernel, double beta,
                                   const std::vector<double>& samples,
                                   double lambda) {
    const std::size_t count = samples.size();
    const double h = 2.0 * pi / static_cast<double>(count);
    std::vector<double> zeros;
    for (std::size_t j = 0; j < count; ++j) {
        const double ga = samples[j] - lambda;
        const double gb = samples[(j + 1) % count] - lambda;
        if (!(ga * gb < 0.0)) continue;
        double a = -pi + h * static_cast<double>(j), b = a + h;
        double fa = ga;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (a + b);
            const double fmid = naive_f(kernel, beta, mid) - lambda;
            if (fa * fmid <= 0.0) {
                b = mid;
            } else {
                a = mid;
                fa = fmid;
            }
        }
        zeros.push_back(0.5 * (a + b));
    }
    return zeros;
}

// Integral of |f - lambda|^s over a period: adaptive Gauss-Kronrod between
// the refined sign changes, so every piece is smooth inside.
double piecewise_reference(const gpk::ScaledKernel& kernel, double beta,
                           const std::vector<double>& zeros, double lambda,
                           double s) {
    double total = 0.0;
    const std::size_t m = zeros.size();
    for (std::size_t i = 0; i < m; ++i) {
        const double zl = zeros[i];
        const double zr = (i + 1 < m) ? zeros[i + 1] : zeros[0] + 2.0 * pi;
        auto integrand = [&](double t) {
            return std::pow(std::abs(naive_f(kernel, beta, t) - lambda), s);
        };
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
            integrand, zl, zr, 10, 1e-11);
    }
    return total;
}

} // namespace

TEST_SUITE("norms") {

TEST_CASE("grid norms of a plain sine") {
    const std::size_t count = 1 << 16;
    std::vector<double> v(count);
    for (std::size_t j = 0; j < count; ++j)
        v[j] = std::sin(-pi + 2.0 * pi * static_cast<double>(j) /
                                 static_cast<double>(count));
    CHECK(gpk::lp_norm_grid(v, 2.0) == doctest::Approx(std::sqrt(pi)).epsilon(1e-12));
    CHECK(gpk::lp_norm_grid(v, 1.0) == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(gpk::lp_norm_grid(v, 4.0) ==
          doctest::Approx(std::pow(3.0 * pi / 4.0, 0.25)).epsilon(1e-12));
    CHECK(gpk::lp_norm_grid(v, gpk::inf) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("best constant closed cases") {
    const std::vector<double> v{1.0, 2.0, 10.0};
    const auto sup = gpk::best_constant(v, gpk::inf);
    CHECK(sup.lambda == doctest::Approx(5.5));
    CHECK(sup.value == doctest::Approx(4.5));
    const auto med = gpk::best_constant(v, 1.0);
    CHECK(med.lambda == doctest::Approx(2.0));
    CHECK(med.value == doctest::Approx(2.0 * pi / 3.0 * 9.0).epsilon(1e-13));
    const auto mean = gpk::best_constant(v, 2.0);
    CHECK(mean.lambda == doctest::Approx(13.0 / 3.0).epsilon(1e-14));

    const std::vector<double> even{0.0, 1.0, 3.0, 10.0};
    CHECK(gpk::best_constant(even, 1.0).lambda == doctest::Approx(2.0));
}

TEST_CASE("best constant golden section matches a brute scan") {
    const std::vector<double> v{-3.0, -1.0, 0.5, 2.0, 2.5, 7.0};
    const double s = 3.0;
    const auto got = gpk::best_constant(v, s);
    auto objective = [&](double lambda) {
        double acc = 0.0;
        for (double x : v) acc += std::pow(std::abs(x - lambda), s);
        return acc;
    };
    double best = 1e300, best_lambda = 0.0;
    for (double lambda = -3.0; lambda <= 7.0; lambda += 1e-5) {
        const double j = objective(lambda);
        if (j < best) { best = j; best_lambda = lambda; }
    }
    CHECK(got.lambda == doctest::Approx(best_lambda).epsilon(1e-4));
    CHECK(objective(got.lambda) <= best * (1.0 + 1e-12));
}

TEST_CASE("series evaluation reproduces the geometric closed form") {
    // r = 1: sum of squares is geometric, so the error is
    // e^{-alpha n} / sqrt(pi (1 - e^{-2 alpha})).
    const auto a = gpk::exact_en_p2(std::log(2.0), 1.0, 3);
    const double unscaled_a = a.value_scaled * std::exp(a.log_factor);
    CHECK(unscaled_a == doctest::Approx(1.0 / (4.0 * std::sqrt(3.0 * pi))).epsilon(1e-13));

    const double alpha = 0.7;
    const auto b = gpk::exact_en_p2(alpha, 1.0, 10);
    CHECK(b.value_scaled ==
          doctest::Approx(1.0 / std::sqrt(pi * (1.0 - std::exp(-2.0 * alpha))))
              .epsilon(1e-13));
    CHECK(b.converged);
    CHECK(b.grid_size == 0);
}

TEST_CASE("grid path and series path cross-check at p = 2") {
    const auto series = gpk::exact_en_p2(1.0, 0.5, 50);
    for (double beta : {0.0, 0.5, 1.0, 1.7}) {
        gpk::ClassParams params;
        params.alpha = 1.0;
        params.r = 0.5;
        params.beta = beta;
        params.p = 2.0;
        const auto grid = gpk::exact_en(params, 50);
        CHECK(grid.converged);
        CHECK(grid.value_scaled ==
              doctest::Approx(series.value_scaled).epsilon(1e-12));
        CHECK(std::abs(grid.lambda) <= 1e-10);
    }
}

TEST_CASE("uniform-norm path against a naive scan") {
    gpk::ClassParams params;
    params.alpha = 1.0;
    params.r = 0.5;
    params.beta = 0.3;
    params.p = 1.0; // conjugate exponent is infinity
    const auto got = gpk::exact_en(params, 20);
    CHECK(got.converged);

    const auto kernel = gpk::build_scaled_kernel(1.0, 0.5, 20);
    const std::size_t count = 1 << 17;
    const auto samples = naive_samples(kernel, 0.3, count);
    const double h = 2.0 * pi / static_cast<double>(count);
    const std::size_t jmax =
        std::max_element(samples.begin(), samples.end()) - samples.begin();
    const std::size_t jmin =
        std::min_element(samples.begin(), samples.end()) - samples.begin();
    const double sup = refine_extremum(
        kernel, 0.3, -pi + h * static_cast<double>(jmax), h, +1.0);
    const double inf = refine_extremum(
        kernel, 0.3, -pi + h * static_cast<double>(jmin), h, -1.0);
    const double reference = (sup - inf) / (2.0 * pi);
    CHECK(got.value_scaled == doctest::Approx(reference).epsilon(1e-9));
}

TEST_CASE("integral-norm path against bisected zeros and adaptive pieces") {
    gpk::ClassParams params;
    params.alpha = 1.0;
    params.r = 0.5;
    params.beta = 0.7;
    params.p = gpk::inf; // conjugate exponent is 1
    const auto got = gpk::exact_en(params, 20);
    CHECK(got.converged);

    const auto kernel = gpk::build_scaled_kernel(1.0, 0.5, 20);
    const std::size_t count = 1 << 17;
    auto samples = naive_samples(kernel, 0.7, count);
    std::vector<double> sorted(samples);
    std::sort(sorted.begin(), sorted.end());
    const double lambda =
        0.5 * (sorted[count / 2 - 1] + sorted[count / 2]);
    const auto zeros = bisected_zeros(kernel, 0.7, samples, lambda);
    REQUIRE(zeros.size() >= 2);
    const double reference =
        piecewise_reference(kernel, 0.7, zeros, lambda, 1.0) / pi;
    CHECK(got.value_scaled == doctest::Approx(reference).epsilon(1e-8));
}

TEST_CASE("general-exponent path against bisected zeros and adaptive pieces") {
    for (double p : {1.5, 4.0}) {
        gpk::ClassParams params;
        params.alpha = 1.0;
        params.r = 0.5;
        params.beta = 0.3;
        params.p = p;
        const double s = gpk::conjugate_exponent(p);
        const auto got = gpk::exact_en(params, 20);
        CHECK(got.converged);

        const auto kernel = gpk::build_scaled_kernel(1.0, 0.5, 20);
        const std::size_t count = 1 << 17;
        auto samples = naive_samples(kernel, 0.3, count);
        // The reference constant comes from a dense golden-section scan on
        // the sampled objective; the value is insensitive to its tiny error.
        const auto start = gpk::best_constant(samples, s);
        const auto zeros = bisected_zeros(kernel, 0.3, samples, start.lambda);
        REQUIRE(zeros.size() >= 2);
        const double j_ref =
            piecewise_reference(kernel, 0.3, zeros, start.lambda, s);
        const double reference = std::pow(j_ref, 1.0 / s) / pi;
        CHECK(got.value_scaled == doctest::Approx(reference).epsilon(1e-7));
    }
}

TEST_CASE("error decreases in the degree") {
    gpk::ClassParams params;
    params.alpha = 1.0;
    params.r = 0.5;
    params.beta = 0.4;
    params.p = 2.5;
    double prev = 1e300;
    for (std::uint64_t n : {20ull, 40ull, 80ull}) {
        const auto res = gpk::exact_en(params, n);
        const double unscaled = res.value_scaled * std::exp(res.log_factor);
        CHECK(unscaled < prev);
        prev = unscaled;
    }
}

TEST_CASE("grid override reproduces the automatic result") {
    gpk::ClassParams params;
    params.alpha = 1.0;
    params.r = 0.5;
    params.beta = 0.3;
    params.p = 1.0;
    const auto automatic = gpk::exact_en(params, 20);
    gpk::ExactEnConfig config;
    config.grid_override = automatic.grid_size * 2;
    const auto overridden = gpk::exact_en(params, 20, config);
    CHECK(overridden.value_scaled ==
          doctest::Approx(automatic.value_scaled).epsilon(1e-10));
}

TEST_CASE("preconditions") {
    gpk::ClassParams params;
    gpk::ExactEnConfig config;
    config.tol = 0.0;
    CHECK_THROWS_AS(gpk::exact_en(params, 10, config), std::invalid_argument);
    CHECK_THROWS_AS(gpk::exact_en_p2(1.0, 1.5, 10), std::invalid_argument);
    CHECK_THROWS_AS(gpk::lp_norm_grid({}, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(gpk::lp_norm_grid({1.0}, 0.5), std::invalid_argument);
    gpk::ClassParams bad;
    bad.p = 0.5;
    CHECK_THROWS_AS(gpk::exact_en(bad, 10), std::invalid_argument);
}

} // TEST_SUITE
