#pragma once

// Analytic ingredients shared by the asymptotic main terms and the
// certification suite: the truncated decay-norm integral J_s, exponential
// tail integrals with their leading-term estimate, complete and generalized
// elliptic integrals, and L_s norms of the cosine.

namespace gpk {

// J_s(upsilon) = || (t^2+1)^{-1/2} ||_{L_s[0, upsilon]}.
// Closed forms: s = 1 -> ln(upsilon + sqrt(upsilon^2+1)),
// s = 2 -> sqrt(arctan upsilon), s = inf -> 1 (for upsilon > 0).
// Other s: adaptive quadrature, relative tolerance 1e-12.
double j_s(double upsilon, double s);

// Limit of J_s as upsilon -> inf, i.e. (integral_0^inf (t^2+1)^{-s/2} dt)^{1/s}.
// Requires s > 1.  Evaluated in closed form through the gamma function.
double j_s_full_line(double s);

// integral_m^inf e^{-gamma t^r} t^delta dt.  Requires gamma > 0, r > 0,
// m >= 1, finite delta.  With scaled = true the result carries the factor
// e^{+gamma m^r}, which is the representable quantity when gamma m^r is
// large; the unscaled value underflows to 0 beyond the double range.
double tail_integral(double gamma, double r, double delta, double m,
                     bool scaled = false);

struct TailEstimate {
    double value_scaled = 0.0;     // e^{gamma m^r} * integral
    double main_term_scaled = 0.0; // m^{delta+1-r} / (gamma r)
    double theta = 0.0;            // correction factor, |theta| <= 14/13 when admissible
    bool admissible = false;       // m >= (14 |delta+1-r| / (gamma r))^{1/r}
};

// Leading-term estimate of the tail integral:
//   integral = main * (1 + theta * (|delta+1-r|/(gamma r)) * m^{-r}),
// exact (theta = 0) when delta + 1 - r = 0.
TailEstimate tail_estimate(double gamma, double r, double delta, double m);

// Complete elliptic integral of the first kind, modulus q in [0, 1),
// computed by the arithmetic-geometric mean.
double elliptic_k(double q);

// K(p', q) = 2^{-(1+1/p')} || (1 - 2q cos t + q^2)^{-1/2} ||_{L_{p'}[0, 2pi]}.
// Requires p' in [1, inf), q in [0, 1).  K(1, q) is the complete elliptic
// integral above; K(p', 0) = pi^{1/p'} / 2.
double generalized_k(double p_prime, double q);

// || cos ||_{L_s[0, 2pi]}: 4 for s = 1, sqrt(pi) for s = 2, 1 for s = inf,
// quadrature otherwise (relative tolerance 1e-12).
double cos_lp_norm(double s);

} // namespace gpk
