#include "gpk/kernel.hpp"

#include "gpk/errors.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace gpk {
namespace {

constexpr double pi = std::numbers::pi;
constexpr std::size_t max_coeff_count = std::size_t{1} << 25;

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// alpha ((k+n)^r - n^r), evaluated without cancellation.
double exponent_diff(double alpha, double r, double n, double k) {
    return alpha * std::pow(n, r) * std::expm1(r * std::log1p(k / n));
}

// FFTW planning is not thread safe; execution of a plan on its own arrays is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// Backward DFT: out[j] = sum_k in[k] e^{+2 pi i j k / N}.
void backward_dft(std::vector<std::complex<double>>& data) {
    const std::size_t n = data.size();
    auto* raw = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(n), raw, raw, FFTW_BACKWARD,
                                FFTW_ESTIMATE);
    }
    if (plan == nullptr) throw NonConvergence("fftw plan creation failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
}

// Grid eval shared by the value and derivative transforms: spectrum[k] holds
// the k-th coefficient; nodes are t_j = -pi + 2 pi j / N, so the transform
// input is spectrum[k] (-1)^k.
GridSamples eval_spectrum(const std::vector<std::complex<double>>& spectrum,
                          std::size_t n_nodes) {
    require(is_pow2(n_nodes), "grid size must be a power of two");
    require(n_nodes >= 2 * spectrum.size(),
            "grid size must be at least twice the coefficient count");
    GridSamples out;
    out.values.assign(n_nodes, {0.0, 0.0});
    for (std::size_t k = 0; k < spectrum.size(); ++k)
        out.values[k] = (k % 2 == 0) ? spectrum[k] : -spectrum[k];
    backward_dft(out.values);
    return out;
}

// e^{ikt} for k = k0..k0+count-1 via rotation, re-anchored on an exact
// cos/sin every block so the accumulated phase drift stays near machine eps.
constexpr std::size_t rotation_block = 256;

} // namespace

double GridSamples::node(std::size_t j) const {
    return -pi + 2.0 * pi * static_cast<double>(j) / static_cast<double>(size());
}

ScaledKernel build_scaled_kernel(double alpha, double r, std::uint64_t n, double eps) {
    require(std::isfinite(alpha) && alpha > 0.0, "alpha must be > 0");
    require(std::isfinite(r) && r > 0.0 && r <= 1.0, "r must be in (0, 1]");
    require(n >= 1, "n must be >= 1");
    require(eps > 0.0 && eps <= 1e-4, "eps must be in (0, 1e-4]");
    ScaledKernel kernel;
    kernel.alpha = alpha;
    kernel.r = r;
    kernel.n = n;
    kernel.eps = eps;
    const double nn = static_cast<double>(n);
    double partial = 0.0;
    for (std::size_t k = 0;; ++k) {
        if (k > max_coeff_count)
            throw NonConvergence("kernel coefficient count exceeded the cap");
        const double c = std::exp(-exponent_diff(alpha, r, nn, static_cast<double>(k)));
        kernel.coeffs.push_back(c);
        partial += c;
        if (c < eps) {
            const double tail_bound = (14.0 / 13.0) * c *
                                      std::pow(static_cast<double>(k) + nn, 1.0 - r) /
                                      (alpha * r);
            if (tail_bound <= eps * partial) break;
        }
    }
    return kernel;
}

std::size_t default_grid_size(const ScaledKernel& kernel, bool resolve_carrier) {
    const double nn = static_cast<double>(kernel.n);
    const double width = kernel.alpha * kernel.r * std::pow(nn, kernel.r - 1.0);
    std::size_t need = 4096;
    need = std::max(need, 4 * kernel.k_count());
    need = std::max(need, static_cast<std::size_t>(64.0 * std::ceil(1.0 / width)));
    if (resolve_carrier)
        need = std::max(need, static_cast<std::size_t>(16 * kernel.n));
    std::size_t n_nodes = 1;
    while (n_nodes < need) n_nodes <<= 1;
    return n_nodes;
}

GridSamples kernel_grid_eval(const ScaledKernel& kernel, std::size_t n_nodes) {
    std::vector<std::complex<double>> spectrum(kernel.coeffs.size());
    for (std::size_t k = 0; k < spectrum.size(); ++k)
        spectrum[k] = {kernel.coeffs[k], 0.0};
    return eval_spectrum(spectrum, n_nodes);
}

GridSamples kernel_derivative_grid_eval(const ScaledKernel& kernel,
                                        std::size_t n_nodes) {
    std::vector<std::complex<double>> spectrum(kernel.coeffs.size());
    for (std::size_t k = 0; k < spectrum.size(); ++k)
        spectrum[k] = {0.0, static_cast<double>(k) * kernel.coeffs[k]};
    return eval_spectrum(spectrum, n_nodes);
}

std::complex<double> kernel_point_eval(const ScaledKernel& kernel, double t) {
    const std::complex<double> step = std::polar(1.0, t);
    std::complex<double> acc = 0.0;
    for (std::size_t k0 = 0; k0 < kernel.coeffs.size(); k0 += rotation_block) {
        std::complex<double> w = std::polar(1.0, t * static_cast<double>(k0));
        const std::size_t end = std::min(k0 + rotation_block, kernel.coeffs.size());
        for (std::size_t k = k0; k < end; ++k) {
            acc += kernel.coeffs[k] * w;
            w *= step;
        }
    }
    return acc;
}

std::complex<double> kernel_point_deriv(const ScaledKernel& kernel, double t) {
    const std::complex<double> step = std::polar(1.0, t);
    const std::complex<double> iu{0.0, 1.0};
    std::complex<double> acc = 0.0;
    for (std::size_t k0 = 0; k0 < kernel.coeffs.size(); k0 += rotation_block) {
        std::complex<double> w = std::polar(1.0, t * static_cast<double>(k0));
        const std::size_t end = std::min(k0 + rotation_block, kernel.coeffs.size());
        for (std::size_t k = k0; k < end; ++k) {
            acc += static_cast<double>(k) * kernel.coeffs[k] * w;
            w *= step;
        }
    }
    return iu * acc;
}

double kernel_sup_norm(const ScaledKernel& kernel) {
    double sum = 0.0;
    // Ascending magnitudes first for a slightly tighter summation error.
    for (std::size_t k = kernel.coeffs.size(); k-- > 0;) sum += kernel.coeffs[k];
    return sum;
}

namespace {

// Shared accumulation loop for the real trig series: term(k, cos, sin) is
// summed over the table with theta_k = (k+n) t - beta pi/2 tracked by a
// rotation recurrence, re-anchored every block.
template <class Term>
double real_series_accumulate(const ScaledKernel& kernel, double beta, double t,
                              Term term) {
    const double phase0 = static_cast<double>(kernel.n) * t - beta * pi / 2.0;
    const double dc = std::cos(t);
    const double ds = std::sin(t);
    double acc = 0.0;
    for (std::size_t k0 = 0; k0 < kernel.coeffs.size(); k0 += rotation_block) {
        const std::size_t end = std::min(k0 + rotation_block, kernel.coeffs.size());
        double c = std::cos(phase0 + t * static_cast<double>(k0));
        double s = std::sin(phase0 + t * static_cast<double>(k0));
        for (std::size_t k = k0; k < end; ++k) {
            acc += term(k, c, s);
            const double cn = c * dc - s * ds;
            s = s * dc + c * ds;
            c = cn;
        }
    }
    return acc;
}

} // namespace

double kernel_real_form(const ScaledKernel& kernel, double beta, double t) {
    return real_series_accumulate(
        kernel, beta, t,
        [&](std::size_t k, double c, double) { return kernel.coeffs[k] * c; });
}

double kernel_real_deriv(const ScaledKernel& kernel, double beta, double t) {
    const double nn = static_cast<double>(kernel.n);
    return real_series_accumulate(kernel, beta, t,
                                  [&](std::size_t k, double, double s) {
                                      return -kernel.coeffs[k] *
                                             (static_cast<double>(k) + nn) * s;
                                  });
}

double kernel_real_antideriv(const ScaledKernel& kernel, double beta, double t) {
    const double nn = static_cast<double>(kernel.n);
    return real_series_accumulate(kernel, beta, t,
                                  [&](std::size_t k, double, double s) {
                                      return kernel.coeffs[k] * s /
                                             (static_cast<double>(k) + nn);
                                  });
}

} // namespace gpk
