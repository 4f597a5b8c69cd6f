#ifndef TORSIONLAB_ZETA_HPP
#define TORSIONLAB_ZETA_HPP

#include <complex>
#include <functional>
#include <utility>
#include <vector>

// Mellin-transform zeta functions from small-time expansion data plus a
// sampled exponentially-decaying tail, Laurent data by Cauchy integrals, and
// the alternating finite-part combination defining the torsion logarithm.

namespace torsionlab::zeta {

using cplx = std::complex<double>;

cplx log_gamma(cplx z);
cplx gamma(cplx z);

struct MellinTerm {
  double exponent = 0.0;  // theta(t) ~ sum coef * t^exponent (log t)^power on (0,1]
  int log_power = 0;
  double coefficient = 0.0;
};

// zeta(s) = Gamma(s)^{-1} [ sum of closed-form term transforms on (0,1]
//           + cubic-Hermite integral of the tail samples on [1,T]
//           + fitted c e^{-mu t} continuation beyond T ]
struct MellinZeta {
  std::vector<MellinTerm> terms;
  std::vector<std::pair<double, double>> tail;  // (t, theta(t)), t ascending from 1
  std::vector<double> tail_slope;               // dtheta/dt estimates at the samples
  double tail_rate = 0.0, tail_coef = 0.0;

  // Fits the continuation rate; throws if the tail does not decay.
  static MellinZeta build(std::vector<MellinTerm> terms,
                          std::vector<std::pair<double, double>> tail_samples);

  cplx mellin_numerator(cplx s) const;  // Gamma(s) * zeta(s)
  cplx operator()(cplx s) const;
};

// f(s) = sum_{k >= lowest} coeffs[k - lowest] (s - s0)^k near s0
struct Laurent {
  double s0 = 0.0;
  int lowest = 0;
  std::vector<cplx> coeffs;
  cplx coefficient(int order) const;
};

Laurent laurent_series(const std::function<cplx(cplx)>& f, double s0, int lowest, int highest,
                       double radius = 0.1, int n_points = 64);

// FP_{s=0}(zeta(s)/s) = the s^1 Laurent coefficient of zeta at 0
double finite_part_zeta_over_s(const MellinZeta& z);

struct TorsionResult {
  double via_finite_parts = 0.0;  // 1/2 sum_p (-1)^p p FP(zeta_p/s)
  double via_derivative = 0.0;    // 1/2 d/ds of the alternating sum (when pole-free)
  double max_pole_coefficient = 0.0;  // largest |negative-order coefficient| of the sum
};

// zeta_by_p[i] is zeta_{p = i+1}
TorsionResult finite_part_and_torsion(const std::vector<MellinZeta>& zeta_by_p);

}  // namespace torsionlab::zeta

#endif
