#include "gpk/cli.hpp"

#include "gpk/asymptotics.hpp"
#include "gpk/errors.hpp"
#include "gpk/kernel.hpp"
#include "gpk/norms.hpp"
#include "gpk/params.hpp"
#include "gpk/special.hpp"
#include "gpk/verification.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gpk {
namespace {

constexpr double pi = std::numbers::pi;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string cell(const std::optional<double>& v) {
    if (!v || std::isnan(*v)) return "";
    return fmt17(*v);
}

std::string cell(const std::optional<std::uint64_t>& v) {
    return v ? std::to_string(*v) : "";
}

nlohmann::ordered_json json_of(const std::optional<double>& v) {
    if (!v || std::isnan(*v)) return nullptr;
    return *v;
}

nlohmann::ordered_json json_of(const std::optional<std::uint64_t>& v) {
    if (!v) return nullptr;
    return *v;
}

std::size_t worker_count() {
    const char* env = std::getenv("GPK_WORKERS");
    if (env == nullptr) return 1;
    char* end = nullptr;
    const unsigned long parsed = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || parsed == 0) return 1;
    return static_cast<std::size_t>(parsed);
}

} // namespace

std::vector<std::uint64_t> parse_n_list(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::vector<std::string> tokens;
    std::string::size_type start = 0;
    for (;;) {
        const auto comma = text.find(',', start);
        tokens.push_back(text.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    auto to_u64 = [](const std::string& s) -> std::uint64_t {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(s, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad n token: " + s);
        }
        if (used != s.size() || v == 0)
            throw std::invalid_argument("bad n token: " + s);
        return v;
    };
    for (const std::string& token : tokens) {
        if (token.empty()) throw std::invalid_argument("empty n token");
        const auto c1 = token.find(':');
        if (c1 == std::string::npos) {
            out.push_back(to_u64(token));
            continue;
        }
        const auto c2 = token.find(':', c1 + 1);
        if (c2 == std::string::npos || token.size() <= c2 + 1 ||
            token[c2 + 1] != 'x')
            throw std::invalid_argument("bad n range (want lo:hi:xF): " + token);
        const std::uint64_t lo = to_u64(token.substr(0, c1));
        const std::uint64_t hi = to_u64(token.substr(c1 + 1, c2 - c1 - 1));
        const std::uint64_t factor = to_u64(token.substr(c2 + 2));
        if (factor < 2 || lo > hi)
            throw std::invalid_argument("bad n range (want lo:hi:xF): " + token);
        for (std::uint64_t v = lo; v <= hi; v *= factor) {
            out.push_back(v);
            if (v > hi / factor) break; // next step would overflow
        }
    }
    return out;
}

void validate(const RunConfig& config) {
    ClassParams params;
    params.alpha = config.alpha;
    params.r = config.r;
    params.beta = config.beta;
    params.p = config.p;
    gpk::validate(params);
    if (config.n_list.empty()) throw std::invalid_argument("n list is empty");
    for (std::size_t i = 1; i < config.n_list.size(); ++i)
        if (config.n_list[i] <= config.n_list[i - 1])
            throw std::invalid_argument("n list must be strictly ascending");
    if (!(config.eps > 0.0) || !(config.eps < 1.0))
        throw std::invalid_argument("eps must be in (0, 1)");
    if (!(config.tol > 0.0) || !(config.tol < 1.0))
        throw std::invalid_argument("tol must be in (0, 1)");
    if (config.format != "csv" && config.format != "json")
        throw std::invalid_argument("format must be csv or json");
    static const char* suites[] = {"all", "kernel", "decomposition", "lemmas",
                                   "asymptotics"};
    if (std::find_if(std::begin(suites), std::end(suites),
                     [&](const char* s) { return config.suite == s; }) ==
        std::end(suites))
        throw std::invalid_argument(
            "suite must be all, kernel, decomposition, lemmas, or asymptotics");
}

// ---------------------------------------------------------------------------
// compute
// ---------------------------------------------------------------------------

namespace {

ComputeRow compute_one(const RunConfig& config, std::uint64_t n) {
    ComputeRow row;
    row.n = n;
    row.alpha = config.alpha;
    row.r = config.r;
    row.beta = config.beta;
    row.p = config.p;
    row.eps = config.eps;
    row.tol = config.tol;
    row.log_factor =
        -config.alpha * std::pow(static_cast<double>(n), config.r);

    ClassParams params;
    params.alpha = config.alpha;
    params.r = config.r;
    params.beta = config.beta;
    params.p = config.p;

    auto threshold_of = [](auto&& scan) -> std::optional<std::uint64_t> {
        try {
            return scan();
        } catch (const std::exception&) {
            return std::nullopt; // r = 1 or scan infeasible
        }
    };
    row.threshold_n0 = threshold_of(
        [&] { return threshold_n0(config.alpha, config.r, config.p); });
    row.threshold_n1 =
        threshold_of([&] { return threshold_n1(config.alpha, config.r); });
    row.threshold_n2 = threshold_of(
        [&] { return threshold_n2(config.alpha, config.r, config.p); });

    ExactEnConfig en_config;
    en_config.eps = config.eps;
    en_config.tol = config.tol;
    try {
        const ExactErrorResult res = exact_en(params, n, en_config);
        row.exact_scaled = res.value_scaled;
        row.k_count = res.k_count;
        row.grid_size = res.grid_size;
    } catch (const NonConvergence& e) {
        row.status = std::string("error:") + e.what();
    }
    if (config.p == 2.0) {
        const ExactErrorResult res = exact_en_p2(config.alpha, config.r, n);
        row.exact_p2_scaled = res.value_scaled;
        if (row.k_count == 0) row.k_count = res.k_count;
        if (row.exact_scaled)
            row.p2_gap = std::abs(*row.exact_scaled - *row.exact_p2_scaled) /
                         *row.exact_p2_scaled;
    }
    // The closed form is exact and reachable at any n, so it anchors the
    // residual extraction at p = 2; the dual value anchors everywhere else.
    const std::optional<double> anchor =
        (config.p == 2.0) ? row.exact_p2_scaled : row.exact_scaled;

    auto fill = [&](auto&& maker) -> std::optional<TermCell> {
        try {
            const AsymptoticTerm term = maker();
            TermCell out;
            out.main = term.main;
            out.gamma_bound = term.gamma_bound;
            out.within_regime = term.within_regime;
            out.gamma = anchor ? extract_gamma(*anchor, term)
                               : std::numeric_limits<double>::quiet_NaN();
            return out;
        } catch (const std::exception&) {
            return std::nullopt;
        }
    };
    if (config.r < 1.0) {
        row.window = fill([&] { return main_term_window(params, n); });
        if (std::isinf(config.p)) {
            row.log_form = fill([&] { return main_term_log(params, n); });
        } else {
            row.full_line = fill([&] { return main_term_full(params, n); });
        }
        if (config.p == 2.0) {
            row.p2_plain =
                fill([&] { return p2_estimate_plain(config.alpha, config.r, n); });
            row.p2_refined = fill(
                [&] { return p2_estimate_refined(config.alpha, config.r, n); });
        }
    } else if (std::isinf(config.p)) {
        row.elliptic = fill([&] { return elliptic_crosscheck_r1(config.alpha, n); });
    }
    return row;
}

} // namespace

std::vector<ComputeRow> run_compute(const RunConfig& config) {
    validate(config);
    std::vector<ComputeRow> rows(config.n_list.size());
    const std::size_t workers = worker_count();
    if (workers <= 1) {
        for (std::size_t i = 0; i < rows.size(); ++i)
            rows[i] = compute_one(config, config.n_list[i]);
        return rows;
    }
    // Fan out in waves of `workers`; slot indexing keeps the aggregation
    // order-stable by n regardless of completion order.
    for (std::size_t base = 0; base < rows.size(); base += workers) {
        const std::size_t stop = std::min(rows.size(), base + workers);
        std::vector<std::future<ComputeRow>> batch;
        for (std::size_t i = base; i < stop; ++i)
            batch.push_back(std::async(std::launch::async, [&config, i] {
                return compute_one(config, config.n_list[i]);
            }));
        for (std::size_t i = base; i < stop; ++i)
            rows[i] = batch[i - base].get();
    }
    return rows;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

namespace {

void add_check(std::vector<VerifyRow>& rows, const std::string& check,
               double lhs, double rhs, const std::string& detail) {
    VerifyRow row;
    row.check = check;
    row.lhs = lhs;
    row.rhs = rhs;
    row.status = (lhs <= rhs) ? "pass" : "fail";
    row.detail = detail;
    rows.push_back(std::move(row));
}

void add_skip(std::vector<VerifyRow>& rows, const std::string& check,
              const std::string& detail) {
    VerifyRow row;
    row.check = check;
    row.status = "skipped";
    row.detail = detail;
    rows.push_back(std::move(row));
}

void verify_kernel_suite(const RunConfig& config,
                         std::vector<VerifyRow>& rows) {
    for (const std::uint64_t n : config.n_list) {
        const std::string at = "n=" + std::to_string(n);
        const ScaledKernel kernel =
            build_scaled_kernel(config.alpha, config.r, n, config.eps);
        const auto& c = kernel.coeffs;

        double worst_ratio = 0.0;
        for (std::size_t k = 0; k + 1 < c.size(); ++k)
            worst_ratio = std::max(worst_ratio, c[k + 1] / c[k]);
        add_check(rows, "kernel.coeff-monotone", worst_ratio, 1.0,
                  at + " max successive coefficient ratio");

        double sum = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) sum += c[k];
        const double nd = static_cast<double>(n);
        const double edge = nd + static_cast<double>(c.size()) - 1.0;
        const double tail_rel = (14.0 / 13.0) * c.back() *
                                std::pow(edge, 1.0 - config.r) /
                                (config.alpha * config.r) / sum;
        add_check(rows, "kernel.truncation-tail", tail_rel, config.eps,
                  at + " certified series tail over partial sum");

        const GridSamples grid =
            kernel_grid_eval(kernel, default_grid_size(kernel, false));
        double grid_max = 0.0, grid_min = std::numeric_limits<double>::max();
        for (const auto& v : grid.values) {
            grid_max = std::max(grid_max, std::abs(v));
            grid_min = std::min(grid_min, std::abs(v));
        }
        add_check(rows, "kernel.grid-sup-consistency", grid_max,
                  kernel_sup_norm(kernel) * (1.0 + 1e-12),
                  at + " sampled modulus never above the coefficient sum");
        add_check(rows, "kernel.envelope-floor", 0.5 * (1.0 - 1e-12), grid_min,
                  at + " convexity keeps the scaled modulus at or above 1/2");

        const ParsevalCheck closure = parseval_check(kernel);
        add_check(rows, "kernel.parseval",
                  std::abs(closure.grid_integral - closure.coefficient_sum) /
                      closure.coefficient_sum,
                  1e-10, at + " grid power integral against the coefficient sum");
    }
}

void verify_decomposition_suite(const RunConfig& config,
                                std::vector<VerifyRow>& rows) {
    static const char* checks[] = {"decomp.smooth-positive",
                                   "decomp.alias-positive",
                                   "decomp.alias-window",
                                   "decomp.alias-cap",
                                   "decomp.q-band",
                                   "decomp.log-deriv"};
    std::optional<std::uint64_t> regime;
    try {
        regime = threshold_n2(config.alpha, config.r, 1.0);
    } catch (const std::exception&) {
    }
    for (const std::uint64_t n : config.n_list) {
        const std::string at = "n=" + std::to_string(n);
        if (!regime || n < *regime) {
            const std::string why =
                !regime ? at + " decomposition regime undefined for these (alpha, r)"
                        : at + " below regime threshold " +
                              std::to_string(*regime);
            for (const char* check : checks) add_skip(rows, check, why);
            continue;
        }
        const ScaledKernel kernel =
            build_scaled_kernel(config.alpha, config.r, n, config.eps);
        double min_smooth = std::numeric_limits<double>::max();
        double min_alias = min_smooth;
        double max_alias = 0.0, max_band_dev = 0.0;
        double alias_bound = 0.0, halfwidth = 0.0;
        for (const double t : {0.0, 0.1, 1.0, pi}) {
            const PowerDecomposition dec = power_decompose(kernel, t);
            const SmoothPowerBand band =
                smooth_power_band(config.alpha, config.r, n, t);
            min_smooth = std::min(min_smooth, dec.smooth_part);
            min_alias = std::min(min_alias, dec.alias_part);
            max_alias = std::max(max_alias, dec.alias_part);
            max_band_dev = std::max(
                max_band_dev, std::abs(dec.smooth_part / band.main - 1.0));
            alias_bound = dec.alias_bound;
            halfwidth = band.relative_halfwidth;
        }
        add_check(rows, checks[0], 0.0, min_smooth,
                  at + " smooth power part positive at the probe points");
        add_check(rows, checks[1], 0.0, min_alias,
                  at + " alias part positive at the probe points");
        add_check(rows, checks[2], max_alias, alias_bound,
                  at + " alias part within its certified cap");
        add_check(rows, checks[3], alias_bound, pi / 3.0,
                  at + " alias cap below pi/3");
        add_check(rows, checks[4], max_band_dev, halfwidth,
                  at + " smooth part inside the relative band");
        const LogDerivativeSup sup = log_derivative_sup(kernel);
        add_check(rows, checks[5], sup.value, sup.bound,
                  at + " logarithmic-derivative sup under its bound");
    }
}

void verify_lemmas_suite(const RunConfig& config,
                         std::vector<VerifyRow>& rows) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> da(0.3, 2.0);
    std::uniform_real_distribution<double> dr(0.2, 0.9);
    std::uniform_real_distribution<double> dt(1.0, 200.0);
    std::uniform_real_distribution<double> dv(0.05, 8.0);
    double min_value = std::numeric_limits<double>::max();
    double worst_ratio = 0.0;
    for (int i = 0; i < 20; ++i) {
        const DecayCosineBound res =
            decay_cosine_bound(da(rng), dr(rng), dt(rng), dv(rng));
        min_value = std::min(min_value, res.value);
        worst_ratio = std::max(worst_ratio, res.value / res.bound);
    }
    add_check(rows, "lemma.decay-cosine-positive", 0.0, min_value,
              "20 seeded samples, oscillatory integral stays positive");
    add_check(rows, "lemma.decay-cosine-bound", worst_ratio, 1.0,
              "20 seeded samples, value over certified bound");

    const std::uint64_t n = config.n_list.back();
    const std::string at = "n=" + std::to_string(n);
    const double s = conjugate_exponent(config.p);
    const ScaledKernel kernel =
        build_scaled_kernel(config.alpha, config.r, n, config.eps);
    const EnvelopePair pair = kernel_envelope_pair(kernel);
    const EnvelopeReport report =
        envelope_norm_report(pair, -config.beta * pi / 2.0, n, s);
    add_check(rows, "lemma.shift-le-best", report.half_shift_norm,
              report.best_const_norm * (1.0 + 1e-9),
              at + " shift sup below the best-constant distance");
    add_check(rows, "lemma.best-le-plain", report.best_const_norm,
              report.plain_norm * (1.0 + 1e-9),
              at + " best-constant distance below the plain norm");

    const bool finite = !std::isinf(s);
    const double up1 = finite ? std::sqrt(2.0) * (5.0 * pi + 2.0) + 4.0
                              : 5.0 * std::sqrt(2.0) * pi;
    const double up23 = up1;
    const double lo23 = finite ? -((15.0 * pi + 6.0) / std::sqrt(2.0) + 4.0)
                               : -15.0 * pi / std::sqrt(2.0);
    if (report.within_regime) {
        add_check(rows, "lemma.delta1-window", std::abs(report.deltas[0]), up1,
                  at + " plain-norm residual inside its window");
        add_check(rows, "lemma.delta2-upper", report.deltas[1], up23,
                  at + " best-constant residual under the upper edge");
        add_check(rows, "lemma.delta2-lower", lo23, report.deltas[1],
                  at + " best-constant residual over the lower edge");
        add_check(rows, "lemma.delta3-upper", report.deltas[2], up23,
                  at + " shift residual under the upper edge");
        add_check(rows, "lemma.delta3-lower", lo23, report.deltas[2],
                  at + " shift residual over the lower edge");
    } else {
        const std::string why =
            at + " below the lemma regime floor " + fmt17(report.regime_floor);
        for (const char* check :
             {"lemma.delta1-window", "lemma.delta2-upper", "lemma.delta2-lower",
              "lemma.delta3-upper", "lemma.delta3-lower"})
            add_skip(rows, check, why);
    }
}

void verify_asymptotics_suite(const RunConfig& config,
                              std::vector<VerifyRow>& rows) {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> dg(0.3, 2.5);
    std::uniform_real_distribution<double> dr(0.15, 0.9);
    std::uniform_int_distribution<int> dd(0, 1);
    double worst_theta = 0.0;
    int used = 0;
    while (used < 40) {
        const double gamma_coef = dg(rng);
        const double r = dr(rng);
        const double delta = static_cast<double>(dd(rng));
        const double knee = std::pow(
            14.0 * std::abs(delta + 1.0 - r) / (gamma_coef * r), 1.0 / r);
        std::uniform_real_distribution<double> dm(knee + 1.0, 2.0 * knee + 50.0);
        const TailEstimate est = tail_estimate(gamma_coef, r, delta, dm(rng));
        if (!est.admissible) continue;
        worst_theta = std::max(worst_theta, std::abs(est.theta));
        ++used;
    }
    add_check(rows, "asym.tail-theta", worst_theta, 14.0 / 13.0,
              "40 seeded admissible tails, extracted correction factor");

    ClassParams params;
    params.alpha = config.alpha;
    params.r = config.r;
    params.beta = config.beta;
    params.p = config.p;

    for (const std::uint64_t n : config.n_list) {
        const std::string at = "n=" + std::to_string(n);
        std::optional<double> anchor;
        std::string anchor_note;
        if (config.p == 2.0) {
            anchor = exact_en_p2(config.alpha, config.r, n).value_scaled;
        } else {
            ExactEnConfig en_config;
            en_config.eps = config.eps;
            en_config.tol = config.tol;
            try {
                anchor = exact_en(params, n, en_config).value_scaled;
            } catch (const NonConvergence& e) {
                anchor_note = std::string(": ") + e.what();
            }
        }

        auto gamma_row = [&](const char* check, auto&& maker,
                             const std::string& what) {
            if (config.r >= 1.0) {
                add_skip(rows, check, at + " estimate undefined at r = 1");
                return;
            }
            if (!anchor) {
                add_skip(rows, check,
                         at + " exact value unavailable" + anchor_note);
                return;
            }
            const AsymptoticTerm term = maker();
            if (!term.within_regime) {
                add_skip(rows, check,
                         at + " below certification threshold " +
                             (term.regime_n ==
                                      std::numeric_limits<std::uint64_t>::max()
                                  ? std::string("(scan infeasible)")
                                  : std::to_string(term.regime_n)));
                return;
            }
            add_check(rows, check, std::abs(extract_gamma(*anchor, term)),
                      term.gamma_bound, at + " " + what);
        };
        gamma_row("asym.window-gamma",
                  [&] { return main_term_window(params, n); },
                  "window-form residual inside its certified bound");
        if (std::isinf(config.p)) {
            gamma_row("asym.log-gamma", [&] { return main_term_log(params, n); },
                      "log-form residual inside its certified bound");
        } else {
            gamma_row("asym.full-gamma",
                      [&] { return main_term_full(params, n); },
                      "full-line residual inside its certified bound");
        }
        if (config.p == 2.0) {
            gamma_row("asym.p2-refined",
                      [&] { return p2_estimate_refined(config.alpha, config.r, n); },
                      "refined closed-form residual inside its bound");
            ExactEnConfig en_config;
            en_config.eps = config.eps;
            en_config.tol = config.tol;
            try {
                const double dual = exact_en(params, n, en_config).value_scaled;
                add_check(rows, "asym.p2-gap",
                          std::abs(dual - *anchor) / *anchor, config.tol,
                          at + " dual quadrature against the closed form");
            } catch (const NonConvergence& e) {
                add_skip(rows, "asym.p2-gap",
                         at + " dual value unavailable: " + e.what());
            }
        }
    }

    // Threshold minimality by ceiling probe: the scan must return n with
    // ceiling n and report infeasible with ceiling n - 1.
    auto minimality = [&](const char* check, auto&& scan) {
        std::uint64_t found = 0;
        try {
            found = scan(threshold_ceiling_default);
        } catch (const InfeasibleThreshold&) {
            add_skip(rows, check, "threshold scan infeasible at the ceiling");
            return;
        } catch (const std::invalid_argument&) {
            add_skip(rows, check, "threshold scan undefined at r = 1");
            return;
        }
        bool minimal = true;
        if (scan(found) != found) minimal = false;
        if (found > 1) {
            try {
                scan(found - 1);
                minimal = false; // should have been infeasible
            } catch (const InfeasibleThreshold&) {
            }
        }
        VerifyRow row;
        row.check = check;
        row.lhs = static_cast<double>(found);
        row.rhs = static_cast<double>(found);
        row.status = minimal ? "pass" : "fail";
        row.detail = "scan returns " + std::to_string(found) +
                     "; ceiling probe confirms minimality";
        rows.push_back(std::move(row));
    };
    minimality("asym.n0-minimal", [&](std::uint64_t ceiling) {
        return threshold_n0(config.alpha, config.r, config.p, ceiling);
    });
    minimality("asym.n1-minimal", [&](std::uint64_t ceiling) {
        return threshold_n1(config.alpha, config.r, ceiling);
    });
    minimality("asym.n2-minimal", [&](std::uint64_t ceiling) {
        return threshold_n2(config.alpha, config.r, config.p, ceiling);
    });
}

} // namespace

std::vector<VerifyRow> run_verify(const RunConfig& config) {
    validate(config);
    std::vector<VerifyRow> rows;
    const bool all = config.suite == "all";
    if (all || config.suite == "kernel") verify_kernel_suite(config, rows);
    if (all || config.suite == "decomposition")
        verify_decomposition_suite(config, rows);
    if (all || config.suite == "lemmas") verify_lemmas_suite(config, rows);
    if (all || config.suite == "asymptotics")
        verify_asymptotics_suite(config, rows);
    return rows;
}

ThresholdReport run_thresholds(double alpha, double r, double p) {
    ClassParams params;
    params.alpha = alpha;
    params.r = r;
    params.p = p;
    gpk::validate(params);
    ThresholdReport report;
    report.alpha = alpha;
    report.r = r;
    report.p = p;
    auto scan = [](auto&& f) -> std::optional<std::uint64_t> {
        try {
            return f();
        } catch (const std::exception&) {
            return std::nullopt;
        }
    };
    report.n0 = scan([&] { return threshold_n0(alpha, r, p); });
    report.n1 = scan([&] { return threshold_n1(alpha, r); });
    report.n2 = scan([&] { return threshold_n2(alpha, r, p); });
    return report;
}

// ---------------------------------------------------------------------------
// formatting
// ---------------------------------------------------------------------------

namespace {

const char* const compute_columns[] = {
    "n", "alpha", "r", "beta", "p", "eps", "tol", "status", "log_factor",
    "k_count", "grid_size", "exact_scaled", "exact_p2_scaled", "p2_gap",
    "threshold_n0", "threshold_n1", "threshold_n2"};

const char* const term_names[] = {"window", "full",      "log",
                                  "p2_plain", "p2_refined", "elliptic"};

std::vector<const std::optional<TermCell>*> term_cells(const ComputeRow& row) {
    return {&row.window,   &row.full_line,  &row.log_form,
            &row.p2_plain, &row.p2_refined, &row.elliptic};
}

} // namespace

std::string format_compute(const std::vector<ComputeRow>& rows,
                           const std::string& format) {
    if (format == "json") {
        nlohmann::ordered_json out = nlohmann::ordered_json::array();
        for (const ComputeRow& row : rows) {
            nlohmann::ordered_json j;
            j["n"] = row.n;
            j["alpha"] = row.alpha;
            j["r"] = row.r;
            j["beta"] = row.beta;
            j["p"] = std::isinf(row.p) ? nlohmann::ordered_json("inf")
                                       : nlohmann::ordered_json(row.p);
            j["eps"] = row.eps;
            j["tol"] = row.tol;
            j["status"] = row.status;
            j["log_factor"] = row.log_factor;
            j["k_count"] = row.k_count;
            j["grid_size"] = row.grid_size;
            j["exact_scaled"] = json_of(row.exact_scaled);
            j["exact_p2_scaled"] = json_of(row.exact_p2_scaled);
            j["p2_gap"] = json_of(row.p2_gap);
            j["threshold_n0"] = json_of(row.threshold_n0);
            j["threshold_n1"] = json_of(row.threshold_n1);
            j["threshold_n2"] = json_of(row.threshold_n2);
            const auto cells = term_cells(row);
            for (std::size_t i = 0; i < cells.size(); ++i) {
                const std::string base = term_names[i];
                if (*cells[i]) {
                    const TermCell& term = **cells[i];
                    j[base + "_main"] = term.main;
                    j[base + "_gamma"] =
                        json_of(std::optional<double>(term.gamma));
                    j[base + "_gamma_bound"] = term.gamma_bound;
                    j[base + "_within"] = term.within_regime;
                } else {
                    j[base + "_main"] = nullptr;
                    j[base + "_gamma"] = nullptr;
                    j[base + "_gamma_bound"] = nullptr;
                    j[base + "_within"] = nullptr;
                }
            }
            out.push_back(std::move(j));
        }
        return out.dump(2) + "\n";
    }

    std::string text;
    for (const char* column : compute_columns) {
        text += column;
        text += ',';
    }
    for (std::size_t i = 0; i < std::size(term_names); ++i) {
        const std::string base = term_names[i];
        text += base + "_main," + base + "_gamma," + base + "_gamma_bound," +
                base + "_within";
        text += (i + 1 < std::size(term_names)) ? "," : "\n";
    }
    for (const ComputeRow& row : rows) {
        text += std::to_string(row.n) + ',' + fmt17(row.alpha) + ',' +
                fmt17(row.r) + ',' + fmt17(row.beta) + ',' +
                (std::isinf(row.p) ? "inf" : fmt17(row.p)) + ',' +
                fmt17(row.eps) + ',' + fmt17(row.tol) + ',' + row.status + ',' +
                fmt17(row.log_factor) + ',' + std::to_string(row.k_count) +
                ',' + std::to_string(row.grid_size) + ',' +
                cell(row.exact_scaled) + ',' + cell(row.exact_p2_scaled) +
                ',' + cell(row.p2_gap) + ',' + cell(row.threshold_n0) + ',' +
                cell(row.threshold_n1) + ',' + cell(row.threshold_n2);
        for (const auto* term : term_cells(row)) {
            if (*term) {
                const TermCell& t = **term;
                text += ',' + fmt17(t.main) + ',' +
                        cell(std::optional<double>(t.gamma)) + ',' +
                        fmt17(t.gamma_bound) + ',' +
                        (t.within_regime ? "true" : "false");
            } else {
                text += ",,,,";
            }
        }
        text += '\n';
    }
    return text;
}

std::string format_verify(const std::vector<VerifyRow>& rows,
                          const std::string& format) {
    if (format == "json") {
        nlohmann::ordered_json out = nlohmann::ordered_json::array();
        for (const VerifyRow& row : rows) {
            nlohmann::ordered_json j;
            j["check"] = row.check;
            j["status"] = row.status;
            j["lhs"] = json_of(row.lhs);
            j["rhs"] = json_of(row.rhs);
            j["detail"] = row.detail;
            out.push_back(std::move(j));
        }
        return out.dump(2) + "\n";
    }
    std::string text = "check,status,lhs,rhs,detail\n";
    for (const VerifyRow& row : rows) {
        std::string detail = row.detail;
        std::replace(detail.begin(), detail.end(), ',', ';');
        text += row.check + ',' + row.status + ',' + cell(row.lhs) + ',' +
                cell(row.rhs) + ',' + detail + '\n';
    }
    return text;
}

std::string format_thresholds(const ThresholdReport& report,
                              const std::string& format) {
    if (format == "json") {
        nlohmann::ordered_json j;
        j["alpha"] = report.alpha;
        j["r"] = report.r;
        j["p"] = std::isinf(report.p) ? nlohmann::ordered_json("inf")
                                      : nlohmann::ordered_json(report.p);
        j["n0"] = json_of(report.n0);
        j["n1"] = json_of(report.n1);
        j["n2"] = json_of(report.n2);
        return j.dump(2) + "\n";
    }
    return "alpha,r,p,n0,n1,n2\n" + fmt17(report.alpha) + ',' +
           fmt17(report.r) + ',' +
           (std::isinf(report.p) ? "inf" : fmt17(report.p)) + ',' +
           cell(report.n0) + ',' + cell(report.n1) + ',' + cell(report.n2) +
           '\n';
}

// ---------------------------------------------------------------------------
// front end
// ---------------------------------------------------------------------------

namespace {

double parse_p(const std::string& text) {
    if (text == "inf" || text == "Inf" || text == "INF" || text == "infinity")
        return inf;
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad p value: " + text);
    }
    if (used != text.size()) throw std::invalid_argument("bad p value: " + text);
    return value;
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot open output: " + out_path);
    file << text;
}

struct RawOptions {
    RunConfig config;
    std::string p_text = "1";
    std::string n_text = "1225";
    std::string config_path;
};

std::string trimmed(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

double parse_config_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double parsed = 0.0;
    try {
        parsed = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != value.size())
        throw std::invalid_argument("bad config value for " + key + ": " + value);
    return parsed;
}

// Flat key=value file ('#' comments); command-line flags take precedence.
// CLI11's own config hook only fires on the root app, so subcommand configs
// are applied by hand here.
void apply_config_file(const CLI::App* cmd, RawOptions& raw) {
    if (raw.config_path.empty()) return;
    std::ifstream file(raw.config_path);
    if (!file)
        throw std::invalid_argument("cannot read config: " + raw.config_path);
    std::string line;
    while (std::getline(file, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trimmed(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("bad config line (want key=value): " +
                                        line);
        const std::string key = trimmed(line.substr(0, eq));
        const std::string value = trimmed(line.substr(eq + 1));
        const CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (opt == nullptr)
            throw std::invalid_argument("unknown config key: " + key);
        if (opt->count() > 0) continue; // flag on the command line wins
        if (key == "alpha")
            raw.config.alpha = parse_config_double(key, value);
        else if (key == "r")
            raw.config.r = parse_config_double(key, value);
        else if (key == "beta")
            raw.config.beta = parse_config_double(key, value);
        else if (key == "eps")
            raw.config.eps = parse_config_double(key, value);
        else if (key == "tol")
            raw.config.tol = parse_config_double(key, value);
        else if (key == "p")
            raw.p_text = value;
        else if (key == "n")
            raw.n_text = value;
        else if (key == "format")
            raw.config.format = value;
        else if (key == "out")
            raw.config.out_path = value;
        else if (key == "suite")
            raw.config.suite = value;
        else
            throw std::invalid_argument("unknown config key: " + key);
    }
}

void add_common_options(CLI::App* cmd, RawOptions& raw) {
    cmd->add_option("--alpha", raw.config.alpha, "kernel decay rate (> 0)")
        ->capture_default_str();
    cmd->add_option("--r", raw.config.r, "decay exponent in (0, 1]")
        ->capture_default_str();
    cmd->add_option("--beta", raw.config.beta, "phase parameter")
        ->capture_default_str();
    cmd->add_option("--p", raw.p_text, "integral index in [1, inf], 'inf' ok")
        ->capture_default_str();
    cmd->add_option("--n", raw.n_text,
                    "orders: comma list and/or geometric ranges lo:hi:xF")
        ->capture_default_str();
    cmd->add_option("--eps", raw.config.eps, "kernel truncation target")
        ->capture_default_str();
    cmd->add_option("--tol", raw.config.tol, "quadrature doubling tolerance")
        ->capture_default_str();
    cmd->add_option("--format", raw.config.format, "csv | json")
        ->capture_default_str();
    cmd->add_option("--out", raw.config.out_path, "output path (default stdout)");
    cmd->add_option("--config", raw.config_path,
                    "key=value file; command-line flags take precedence");
}

} // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"exact and asymptotic Fourier-sum approximation errors on "
                 "generalized Poisson integral classes"};
    app.require_subcommand(1);

    RawOptions compute_raw, verify_raw;
    CLI::App* compute_cmd =
        app.add_subcommand("compute", "exact scaled errors with every "
                                      "applicable main term and residual");
    add_common_options(compute_cmd, compute_raw);
    CLI::App* verify_cmd = app.add_subcommand(
        "verify", "certified-inequality table over the invariant suite");
    add_common_options(verify_cmd, verify_raw);
    verify_cmd
        ->add_option("--suite", verify_raw.config.suite,
                     "all | kernel | decomposition | lemmas | asymptotics")
        ->capture_default_str();

    double thr_alpha = 1.0, thr_r = 0.5;
    std::string thr_p = "1", thr_format = "csv", thr_out;
    CLI::App* thresholds_cmd = app.add_subcommand(
        "thresholds", "certification thresholds n0, n1, n2 for a class");
    thresholds_cmd->add_option("--alpha", thr_alpha, "kernel decay rate")
        ->capture_default_str();
    thresholds_cmd->add_option("--r", thr_r, "decay exponent in (0, 1)")
        ->capture_default_str();
    thresholds_cmd->add_option("--p", thr_p, "integral index, 'inf' ok")
        ->capture_default_str();
    thresholds_cmd->add_option("--format", thr_format, "csv | json")
        ->capture_default_str();
    thresholds_cmd->add_option("--out", thr_out, "output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (compute_cmd->parsed()) {
            apply_config_file(compute_cmd, compute_raw);
            compute_raw.config.p = parse_p(compute_raw.p_text);
            compute_raw.config.n_list = parse_n_list(compute_raw.n_text);
            const auto rows = run_compute(compute_raw.config);
            write_output(format_compute(rows, compute_raw.config.format),
                         compute_raw.config.out_path);
            const bool any_error =
                std::any_of(rows.begin(), rows.end(), [](const ComputeRow& r) {
                    return r.status != "ok";
                });
            return any_error ? 3 : 0;
        }
        if (verify_cmd->parsed()) {
            apply_config_file(verify_cmd, verify_raw);
            verify_raw.config.p = parse_p(verify_raw.p_text);
            verify_raw.config.n_list = parse_n_list(verify_raw.n_text);
            const auto rows = run_verify(verify_raw.config);
            write_output(format_verify(rows, verify_raw.config.format),
                         verify_raw.config.out_path);
            const bool any_fail =
                std::any_of(rows.begin(), rows.end(), [](const VerifyRow& r) {
                    return r.status == "fail";
                });
            return any_fail ? 1 : 0;
        }
        if (thr_format != "csv" && thr_format != "json")
            throw std::invalid_argument("format must be csv or json");
        const ThresholdReport report =
            run_thresholds(thr_alpha, thr_r, parse_p(thr_p));
        write_output(format_thresholds(report, thr_format), thr_out);
        return 0;
    } catch (const NonConvergence& e) {
        std::fprintf(stderr, "non-convergence: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

} // namespace gpk
