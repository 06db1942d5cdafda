#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>

// Class parameters and admissibility thresholds.
//
// A class is described by (alpha, r, beta, p): the kernel decay rate alpha > 0,
// the decay exponent 0 < r < 1 (r = 1 is allowed by the kernel engine but the
// threshold scans below require r < 1), a phase parameter beta (any real), and
// the integral index p in [1, inf].  p = inf is represented by
// std::numeric_limits<double>::infinity().
//
// The three thresholds are the smallest integers n at which the scan quantity
//
//     s(n) = (1/(alpha r)) n^{-r} + alpha r chi(p) n^{r-1}
//
// (with a logarithmic variant for threshold_n1) drops below a fixed margin.
// They mark where the remainder estimates of the asymptotic module become
// certified.  The scan quantity is not assumed monotone; every search result
// is re-checked locally.

namespace gpk {

inline constexpr double inf = std::numeric_limits<double>::infinity();

struct ClassParams {
    double alpha = 1.0;
    double r = 0.5;
    double beta = 0.0;
    double p = 2.0;
};

// Throws std::invalid_argument unless alpha > 0, 0 < r <= 1, 1 <= p <= inf.
void validate(const ClassParams& params);

// p' = p/(p-1), with 1 <-> inf.  Requires p in [1, inf].
double conjugate_exponent(double p);

// chi(p) = p for finite p, 1 for p = inf.
double chi(double p);

// Raised when a threshold scan exceeds its ceiling without the condition
// ever holding.
struct InfeasibleThreshold : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t threshold_ceiling_default = std::uint64_t{1} << 62;

// Smallest n >= 1 with
//   (1/(alpha r)) n^{-r} + alpha r chi(p) n^{r-1} <= margin(p),
// margin = 1/14 for p = 1, (p-1)/(p (3 pi)^3) for 1 < p < inf,
// 1/(3 pi)^3 for p = inf.  Requires alpha > 0, 0 < r < 1.
std::uint64_t threshold_n0(double alpha, double r, double p,
                           std::uint64_t ceiling = threshold_ceiling_default);

// Smallest n >= 2 with
//   (1/(alpha r)) n^{-r} (1 + ln(pi n^{1-r}/(alpha r))) + alpha r n^{r-1}
//     <= 1/(3 pi)^3.
// Independent of p.  Requires alpha > 0, 0 < r < 1.
std::uint64_t threshold_n1(double alpha, double r,
                           std::uint64_t ceiling = threshold_ceiling_default);

// Smallest n >= 1 with
//   (1/(alpha r)) n^{-r} + alpha r chi(p) n^{r-1} <= 1/14.
std::uint64_t threshold_n2(double alpha, double r, double p,
                           std::uint64_t ceiling = threshold_ceiling_default);

} // namespace gpk
