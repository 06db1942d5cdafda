#include "doctest.h"

#include "gpk/params.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace {

// Scan predicates restated independently of the library internals; the
// reference searches below walk n linearly instead of bracketing.
bool n0_condition(double alpha, double r, double p, std::uint64_t n) {
    const double cube = std::pow(3.0 * std::numbers::pi, 3.0);
    const double margin = (p == 1.0)      ? 1.0 / 14.0
                          : std::isinf(p) ? 1.0 / cube
                                          : (p - 1.0) / (p * cube);
    const double chi = std::isinf(p) ? 1.0 : p;
    const double nn = static_cast<double>(n);
    return std::pow(nn, -r) / (alpha * r) + alpha * r * chi * std::pow(nn, r - 1.0) <= margin;
}

bool n2_condition(double alpha, double r, double p, std::uint64_t n) {
    const double chi = std::isinf(p) ? 1.0 : p;
    const double nn = static_cast<double>(n);
    return std::pow(nn, -r) / (alpha * r) + alpha * r * chi * std::pow(nn, r - 1.0) <= 1.0 / 14.0;
}

std::uint64_t linear_scan_n0(double alpha, double r, double p, std::uint64_t cap) {
    for (std::uint64_t n = 1; n <= cap; ++n)
        if (n0_condition(alpha, r, p, n)) return n;
    return 0;
}

std::uint64_t linear_scan_n2(double alpha, double r, double p, std::uint64_t cap) {
    for (std::uint64_t n = 1; n <= cap; ++n)
        if (n2_condition(alpha, r, p, n)) return n;
    return 0;
}

} // namespace

TEST_SUITE("params") {

TEST_CASE("conjugate exponent pairs 1 with infinity") {
    CHECK(std::isinf(gpk::conjugate_exponent(1.0)));
    CHECK(gpk::conjugate_exponent(2.0) == 2.0);
    CHECK(gpk::conjugate_exponent(4.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(gpk::conjugate_exponent(gpk::inf) == 1.0);
}

TEST_CASE("conjugate exponent is an involution on (1, inf)") {
    for (double p : {1.5, 2.0, 3.0, 7.25, 40.0}) {
        CHECK(gpk::conjugate_exponent(gpk::conjugate_exponent(p)) ==
              doctest::Approx(p).epsilon(1e-14));
    }
}

TEST_CASE("chi") {
    CHECK(gpk::chi(1.0) == 1.0);
    CHECK(gpk::chi(3.5) == 3.5);
    CHECK(gpk::chi(gpk::inf) == 1.0);
}

TEST_CASE("validate rejects out-of-range parameters") {
    gpk::ClassParams ok;
    CHECK_NOTHROW(gpk::validate(ok));
    gpk::ClassParams bad = ok;
    bad.alpha = 0.0;
    CHECK_THROWS_AS(gpk::validate(bad), std::invalid_argument);
    bad = ok;
    bad.r = 1.5;
    CHECK_THROWS_AS(gpk::validate(bad), std::invalid_argument);
    bad = ok;
    bad.r = 0.0;
    CHECK_THROWS_AS(gpk::validate(bad), std::invalid_argument);
    bad = ok;
    bad.p = 0.5;
    CHECK_THROWS_AS(gpk::validate(bad), std::invalid_argument);
}

TEST_CASE("threshold_n0 at (1, 0.5, 1) matches the linear scan") {
    const std::uint64_t ref = linear_scan_n0(1.0, 0.5, 1.0, 10000);
    CHECK(ref == 1225); // 2.5 / sqrt(1225) equals 1/14 exactly
    CHECK(gpk::threshold_n0(1.0, 0.5, 1.0) == ref);
}

TEST_CASE("threshold_n2 at (1, 0.5, 2) matches the linear scan") {
    const std::uint64_t ref = linear_scan_n2(1.0, 0.5, 2.0, 10000);
    CHECK(ref == 1764); // 3 / sqrt(1764) equals 1/14 exactly
    CHECK(gpk::threshold_n2(1.0, 0.5, 2.0) == ref);
}

TEST_CASE("threshold_n0 at (1, 0.5, 2)") {
    const std::uint64_t n0 = gpk::threshold_n0(1.0, 0.5, 2.0);
    CHECK(n0 == 25230698);
    CHECK(n0_condition(1.0, 0.5, 2.0, n0));
    CHECK_FALSE(n0_condition(1.0, 0.5, 2.0, n0 - 1));
    CHECK_FALSE(n0_condition(1.0, 0.5, 2.0, 1000000));
    CHECK_FALSE(n0_condition(1.0, 0.5, 2.0, 10000000));
}

TEST_CASE("threshold minimality on sampled parameters") {
    // r near 1 with a (3 pi)^-3 margin needs n beyond the 2^62 ceiling, which
    // is the infeasible case tested separately; sample the feasible region.
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> alpha_dist(0.4, 2.0);
    std::uniform_real_distribution<double> r_dist(0.25, 0.7);
    const double ps[] = {1.0, 1.5, 2.0, 4.0, gpk::inf};
    for (int i = 0; i < 40; ++i) {
        const double alpha = alpha_dist(rng);
        const double r = r_dist(rng);
        const double p = ps[i % 5];
        const std::uint64_t n0 = gpk::threshold_n0(alpha, r, p);
        CHECK(n0_condition(alpha, r, p, n0));
        if (n0 > 1) CHECK_FALSE(n0_condition(alpha, r, p, n0 - 1));
        const std::uint64_t n2 = gpk::threshold_n2(alpha, r, p);
        CHECK(n2_condition(alpha, r, p, n2));
        if (n2 > 1) CHECK_FALSE(n2_condition(alpha, r, p, n2 - 1));
        // The n0 margin never exceeds the n2 margin, so n0 >= n2.
        CHECK(n0 >= n2);
    }
}

TEST_CASE("threshold_n1 exceeds threshold_n0 at p = inf") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> alpha_dist(0.5, 2.5);
    std::uniform_real_distribution<double> r_dist(0.3, 0.8);
    for (int i = 0; i < 10; ++i) {
        const double alpha = alpha_dist(rng);
        const double r = r_dist(rng);
        CHECK(gpk::threshold_n1(alpha, r) > gpk::threshold_n0(alpha, r, gpk::inf));
    }
    CHECK(gpk::threshold_n1(1.0, 0.5) == 479795037);
}

TEST_CASE("infeasible ceiling raises") {
    CHECK_THROWS_AS(gpk::threshold_n0(1.0, 0.5, 2.0, 1000),
                    gpk::InfeasibleThreshold);
}

TEST_CASE("threshold preconditions") {
    CHECK_THROWS_AS(gpk::threshold_n0(1.0, 1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(gpk::threshold_n1(-1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(gpk::threshold_n2(1.0, 0.5, 0.2), std::invalid_argument);
}

} // TEST_SUITE
