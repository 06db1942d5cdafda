// Acceptance harness: nine end-to-end checks, one [PASS]/[FAIL] line each.
// Every tolerance is pinned here rather than imported, so a regression in a
// module bound cannot silently relax an acceptance gate.

#include "gpk/asymptotics.hpp"
#include "gpk/kernel.hpp"
#include "gpk/norms.hpp"
#include "gpk/params.hpp"
#include "gpk/special.hpp"
#include "gpk/verification.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace {

constexpr double pi = std::numbers::pi;

int failures = 0;

struct Stopwatch {
    std::chrono::steady_clock::time_point start =
        std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }
};

void report(int id, bool ok, double elapsed, double cap,
            const std::string& text) {
    if (elapsed > cap) ok = false;
    if (!ok) ++failures;
    std::printf("[%s] criterion %d: %s (%.2f s, cap %g s)\n",
                ok ? "PASS" : "FAIL", id, text.c_str(), elapsed, cap);
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// 1. The dual quadrature and the coefficient-series closed form are two
//    independent routes to the same index-two error; they must agree for
//    every phase parameter because the squared modulus is phase-free.
void criterion_1() {
    const Stopwatch timer;
    constexpr double tol = 1e-7;
    double worst = 0.0;
    bool ok = true;
    for (const double beta : {0.0, 0.5, 1.0}) {
        for (const std::uint64_t n : {50u, 200u, 1000u}) {
            gpk::ClassParams params;
            params.alpha = 1.0;
            params.r = 0.5;
            params.beta = beta;
            params.p = 2.0;
            const double dual = gpk::exact_en(params, n).value_scaled;
            const double closed =
                gpk::exact_en_p2(1.0, 0.5, n).value_scaled;
            const double rel = std::abs(dual - closed) / closed;
            worst = std::max(worst, rel);
            ok = ok && rel <= tol;
        }
    }
    report(1, ok, timer.seconds(), 30.0,
           "index-two dual quadrature matches the series closed form, worst "
           "rel " + num(worst) + " over 9 phase/order cases (tol " +
           num(tol) + ")");
}

// 2. At index one, both certified main terms leave residuals inside the
//    coarse (14 pi)^2 window once the order passes its certification
//    threshold.
void criterion_2() {
    const Stopwatch timer;
    constexpr double window = (14.0 * pi) * (14.0 * pi);
    double worst = 0.0;
    bool ok = true;
    gpk::ClassParams params;
    params.alpha = 1.0;
    params.r = 0.5;
    params.beta = 0.0;
    params.p = 1.0;
    for (const std::uint64_t n : {1225u, 2048u, 4096u}) {
        const double exact = gpk::exact_en(params, n).value_scaled;
        const gpk::AsymptoticTerm full = gpk::main_term_full(params, n);
        const gpk::AsymptoticTerm win = gpk::main_term_window(params, n);
        for (const gpk::AsymptoticTerm& term : {full, win}) {
            const double gamma = gpk::extract_gamma(exact, term);
            worst = std::max(worst, std::abs(gamma));
            ok = ok && term.within_regime && std::abs(gamma) <= window;
        }
    }
    report(2, ok, timer.seconds(), 300.0,
           "index-one residuals at orders 1225/2048/4096 stay within the "
           "coarse window, worst |gamma| " + num(worst) + " <= " +
           num(window));
}

// 3. The refined index-two estimate certifies a much tighter residual
//    window, reachable only through the series-only path at the scanned
//    threshold order and twice that.
void criterion_3() {
    const Stopwatch timer;
    const double bound = std::sqrt(54.0 * pi * pi * pi /
                                   (54.0 * pi * pi * pi - 1.0));
    double worst = 0.0;
    bool ok = true;
    const std::uint64_t n0 = gpk::threshold_n0(1.0, 0.5, 2.0);
    ok = ok && n0 == 25230698ull;
    for (const std::uint64_t n : {n0, 2 * n0}) {
        const double exact = gpk::exact_en_p2(1.0, 0.5, n).value_scaled;
        const gpk::AsymptoticTerm term =
            gpk::p2_estimate_refined(1.0, 0.5, n);
        const double gamma = gpk::extract_gamma(exact, term);
        worst = std::max(worst, std::abs(gamma));
        ok = ok && term.within_regime && std::abs(gamma) <= bound;
    }
    report(3, ok, timer.seconds(), 60.0,
           "refined index-two residual at the threshold order " +
           std::to_string(n0) + " and twice it, worst |gamma| " + num(worst) +
           " <= " + num(bound));
}

// 4. The incomplete-gamma tail estimate carries a correction factor that
//    stays within 14/13 of unity for every admissible parameter draw.
void criterion_4() {
    const Stopwatch timer;
    constexpr double cap = 14.0 / 13.0;
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> dg(0.3, 2.5);
    std::uniform_real_distribution<double> dr(0.15, 0.85);
    std::bernoulli_distribution dd(0.5);
    double worst = 0.0;
    bool ok = true;
    for (int i = 0; i < 200; ++i) {
        const double gamma = dg(rng);
        const double r = dr(rng);
        const double delta = dd(rng) ? 1.0 : 0.0;
        const double knee =
            std::pow(14.0 * std::abs(delta + 1.0 - r) / (gamma * r), 1.0 / r);
        std::uniform_real_distribution<double> dm(1.05 * knee,
                                                  3.0 * knee + 50.0);
        const gpk::TailEstimate est =
            gpk::tail_estimate(gamma, r, delta, dm(rng));
        worst = std::max(worst, std::abs(est.theta));
        ok = ok && est.admissible && std::abs(est.theta) <= cap;
    }
    report(4, ok, timer.seconds(), 10.0,
           "tail correction factor over 200 admissible draws, worst |theta| " +
           num(worst) + " <= " + num(cap));
}

// 5. The squared-modulus decomposition splits into a positive smooth part
//    pinned to its Lorentzian band and a positive alias part under pi/3,
//    with the power identity closing on the grid.
void criterion_5() {
    const Stopwatch timer;
    constexpr double parseval_tol = 1e-8;
    const gpk::ScaledKernel kernel =
        gpk::build_scaled_kernel(1.0, 0.5, 1225, 1e-16);
    bool ok = true;
    double worst_alias = 0.0, worst_dev = 0.0;
    for (const double t : {0.0, 0.1, -0.1, 1.0, -1.0, pi, -pi}) {
        const gpk::PowerDecomposition dec = gpk::power_decompose(kernel, t);
        const gpk::SmoothPowerBand band =
            gpk::smooth_power_band(1.0, 0.5, 1225, t);
        ok = ok && dec.smooth_part > 0.0;
        ok = ok && dec.alias_part > 0.0 && dec.alias_part <= pi / 3.0;
        const double dev = std::abs(dec.smooth_part / band.main - 1.0);
        ok = ok && dev <= band.relative_halfwidth;
        worst_alias = std::max(worst_alias, dec.alias_part);
        worst_dev = std::max(worst_dev, dev);
    }
    const gpk::ParsevalCheck closure = gpk::parseval_check(kernel);
    const double rel =
        std::abs(closure.grid_integral - closure.coefficient_sum) /
        closure.coefficient_sum;
    ok = ok && rel <= parseval_tol;
    report(5, ok, timer.seconds(), 120.0,
           "power decomposition at order 1225: alias <= " + num(worst_alias) +
           " < pi/3, band deviation <= " + num(worst_dev) +
           ", power identity closes to " + num(rel));
}

// 6. The logarithmic-derivative sup of the kernel modulus sits under its
//    certified order-growth bound.
void criterion_6() {
    const Stopwatch timer;
    bool ok = true;
    std::string values;
    for (const std::uint64_t n : {1225u, 4096u}) {
        const gpk::ScaledKernel kernel =
            gpk::build_scaled_kernel(1.0, 0.5, n, 1e-16);
        const gpk::LogDerivativeSup sup = gpk::log_derivative_sup(kernel);
        ok = ok && sup.value <= sup.bound;
        if (!values.empty()) values += ", ";
        values += num(sup.value) + " <= " + num(sup.bound);
    }
    report(6, ok, timer.seconds(), 60.0,
           "modulus log-derivative sup under its bound at orders 1225/4096: " +
           values);
}

// 7. The oscillatory-decay bound holds over a randomized sweep, and the
//    three-quantity norm report on the order-1225 kernel keeps every
//    extracted residual inside its stated window at both norm indices.
void criterion_7() {
    const Stopwatch timer;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> da(0.3, 2.0);
    std::uniform_real_distribution<double> dr(0.2, 0.9);
    std::uniform_real_distribution<double> dt(1.0, 200.0);
    std::uniform_real_distribution<double> dv(0.05, 8.0);
    bool ok = true;
    double worst_ratio = 0.0;
    for (int i = 0; i < 100; ++i) {
        const gpk::DecayCosineBound res =
            gpk::decay_cosine_bound(da(rng), dr(rng), dt(rng), dv(rng));
        ok = ok && res.value > 0.0 && res.value <= res.bound;
        worst_ratio = std::max(worst_ratio, res.value / res.bound);
    }

    const double upper = std::sqrt(2.0) * (5.0 * pi + 2.0) + 4.0;
    const double lower = -((15.0 * pi + 6.0) / std::sqrt(2.0) + 4.0);
    const gpk::ScaledKernel kernel =
        gpk::build_scaled_kernel(1.0, 0.5, 1225, 1e-16);
    const gpk::EnvelopePair pair = gpk::kernel_envelope_pair(kernel);
    std::string flags;
    for (const double s : {1.0, 2.0}) {
        const gpk::EnvelopeReport rep =
            gpk::envelope_norm_report(pair, 0.0, 1225, s);
        ok = ok && rep.half_shift_norm <=
                       rep.best_const_norm * (1.0 + 1e-9);
        ok = ok && rep.best_const_norm <= rep.plain_norm * (1.0 + 1e-9);
        ok = ok && std::abs(rep.deltas[0]) <= upper;
        ok = ok && rep.deltas[1] <= upper && rep.deltas[1] >= lower;
        ok = ok && rep.deltas[2] <= upper && rep.deltas[2] >= lower;
        if (!flags.empty()) flags += ", ";
        flags += "s=" + num(s) +
                 (rep.within_regime ? " in regime" : " below regime floor");
    }
    report(7, ok, timer.seconds(), 120.0,
           "oscillatory-decay bound over 100 draws (worst ratio " +
           num(worst_ratio) + ") and order-1225 norm report residuals in "
           "window; " + flags);
}

// 8. The slow-growth regime for the sup-norm class is far out of desk
//    reach, so the certified statement is a trend: the ratio of the exact
//    error to the logarithmic main term is positive, bounded, and drifts
//    monotonically toward one.  The sharp constant stays a soft report.
void criterion_8() {
    const Stopwatch timer;
    constexpr double ratio_cap = 10.0;
    gpk::ClassParams params;
    params.alpha = 1.0;
    params.r = 0.5;
    params.beta = 0.0;
    params.p = gpk::inf;
    bool ok = true;
    std::vector<double> dists;
    std::string ratios;
    double soft_gamma = 0.0;
    for (const std::uint64_t n : {256u, 1024u, 4096u}) {
        const double exact = gpk::exact_en(params, n).value_scaled;
        const double main =
            (4.0 / (pi * pi)) *
            std::log(pi * std::pow(static_cast<double>(n), 0.5) / 0.5);
        const double ratio = exact / main;
        ok = ok && ratio > 0.0 && ratio <= ratio_cap;
        dists.push_back(std::abs(ratio - 1.0));
        if (!ratios.empty()) ratios += ", ";
        ratios += num(ratio);
        soft_gamma = gpk::extract_gamma(exact, gpk::main_term_log(params, n));
    }
    for (std::size_t i = 1; i < dists.size(); ++i)
        ok = ok && dists[i] <= dists[i - 1] + 1e-12;
    report(8, ok, timer.seconds(), 300.0,
           "sup-norm error over log main term at orders 256/1024/4096: "
           "ratios " + ratios + ", distance to one non-increasing");
    std::printf("  soft report (not asserted): order-4096 log-form residual "
                "%.4f vs sharp-constant window %.1f\n",
                soft_gamma, 20.0 * pi * pi * pi * pi);
}

// 9. At full geometric decay the engine must reproduce the classical
//    elliptic-integral value within the stated remainder scale.
void criterion_9() {
    const Stopwatch timer;
    const double alpha = std::log(2.0);
    const double q = std::exp(-alpha);
    gpk::ClassParams params;
    params.alpha = alpha;
    params.r = 1.0;
    params.beta = 0.0;
    params.p = gpk::inf;
    const double exact = gpk::exact_en(params, 30).value_scaled;
    const double main = (8.0 / (pi * pi)) * gpk::elliptic_k(q);
    const double rel = std::abs(exact - main) / main;
    const double cap = 10.0 * q / ((1.0 - q) * 30.0);
    report(9, rel <= cap, timer.seconds(), 30.0,
           "full-decay error at order 30 against the elliptic closed form, "
           "rel " + num(rel) + " <= " + num(cap));
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (failures == 0) {
        std::printf("all 9 acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria failed\n", failures);
    return 1;
}
