#pragma once

#include <complex>
#include <cstdint>
#include <vector>

// Scaled truncated-kernel engine.
//
// The object of study is the complex series
//
//     P(t) = sum_{k>=0} e^{-alpha (k+n)^r} e^{ikt},
//
// whose modulus envelope and derivative drive every certified quantity in
// this project.  All computations carry the factor e^{+alpha n^r}: the stored
// coefficients are c_k = e^{-alpha ((k+n)^r - n^r)} with c_0 = 1, and any
// unscaled value is the scaled one times e^{-alpha n^r} (kept as a separate
// log-factor so nothing underflows).
//
// The exponent difference is evaluated as n^r expm1(r log1p(k/n)), which
// stays fully accurate when k << n even for n ~ 1e8.

namespace gpk {

struct ScaledKernel {
    double alpha = 1.0;
    double r = 0.5;
    std::uint64_t n = 1;
    double eps = 1e-16;
    std::vector<double> coeffs; // c_0 .. c_K, positive, strictly decreasing

    std::size_t k_count() const { return coeffs.size(); }
};

// Uniform samples over [-pi, pi); node j sits at -pi + 2 pi j / size().
struct GridSamples {
    std::vector<std::complex<double>> values;

    std::size_t size() const { return values.size(); }
    double node(std::size_t j) const;
};

// Builds the coefficient table.  Truncation stops at the first K with
// c_K < eps whose certified tail bound
//   sum_{k>K} c_k <= (14/13) c_K (K+n)^{1-r} / (alpha r)
// is below eps times the partial sum.  Requires alpha > 0, 0 < r <= 1,
// n >= 1, 0 < eps <= 1e-4.
ScaledKernel build_scaled_kernel(double alpha, double r, std::uint64_t n,
                                 double eps = 1e-16);

// Smallest power of two >= max(4096, 4K, 64 ceil(1/(alpha r n^{r-1}))), the
// resolution needed by the envelope; with resolve_carrier also >= 16 n, the
// resolution needed once the carrier e^{int} is reattached.
std::size_t default_grid_size(const ScaledKernel& kernel, bool resolve_carrier);

// P at all grid nodes via a length-N discrete Fourier transform of the
// zero-padded coefficients.  Requires N a power of two, N >= 2 (K+1).
GridSamples kernel_grid_eval(const ScaledKernel& kernel, std::size_t n_nodes);

// P' (derivative in t) at all grid nodes; same preconditions.
GridSamples kernel_derivative_grid_eval(const ScaledKernel& kernel,
                                        std::size_t n_nodes);

// P and P' at a single point by direct summation (the reference path; also
// used to refine grid-located structure to machine precision).
std::complex<double> kernel_point_eval(const ScaledKernel& kernel, double t);
std::complex<double> kernel_point_deriv(const ScaledKernel& kernel, double t);

// sup_t |P(t)| = sum_k c_k, attained at t = 0.
double kernel_sup_norm(const ScaledKernel& kernel);

// The real kernel section sum_k c_k cos((k+n) t - beta pi/2), equal to
// Re[ P(t) e^{i(n t - beta pi/2)} ]; computed by direct summation.
double kernel_real_form(const ScaledKernel& kernel, double beta, double t);

// d/dt of the real kernel section:
// -sum_k c_k (k+n) sin((k+n) t - beta pi/2).
double kernel_real_deriv(const ScaledKernel& kernel, double beta, double t);

// The zero-mean antiderivative of the real kernel section:
// sum_k c_k sin((k+n) t - beta pi/2) / (k+n).  Every term has mean zero
// over a period, so definite integrals of the section reduce to differences
// of this series with no quadrature.
double kernel_real_antideriv(const ScaledKernel& kernel, double beta, double t);

} // namespace gpk
