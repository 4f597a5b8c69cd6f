#ifndef TORSIONLAB_ASYMPTOTICS_HPP
#define TORSIONLAB_ASYMPTOTICS_HPP

#include <array>
#include <utility>
#include <vector>

#include "torsionlab/parametrix.hpp"
#include "torsionlab/quadrature.hpp"

// Small-time expansion extraction on the half-integer lattice
// t^{-(d-k)/2 + j/2} (log t)^i, plus the explicit GL(3) coefficient
// computations (the odd-cancellation c13 and the c2 assembly).

namespace torsionlab::asymptotics {

using TraceSamples = std::vector<std::pair<double, double>>;  // (t, value), t ascending

struct ExpansionTerm {
  double exponent = 0.0;
  int log_power = 0;
  double coefficient = 0.0;
  double std_error = 0.0;
  bool zero_consistent = false;  // |coefficient| < 10 * std_error
};

struct AsymptoticExpansion {
  int d = 0, k = 0;
  std::vector<ExpansionTerm> terms;
  double residual = 0.0;          // weighted relative RMS residual
  double condition_number = 0.0;
};

// Weighted least squares on the fixed exponent lattice.  Throws on an
// ill-conditioned basis (extend the t-grid) or too few samples.
AsymptoticExpansion fit_expansion(const TraceSamples& samples, int d, int k, int max_order,
                                  int max_log_power);

double synthesize(const AsymptoticExpansion& e, double t);

// Free leading exponent: scan p minimizing the residual of
// y ~ t^p (poly in log t) + t^{p+1/2} (...) on the small-t half of the grid.
double leading_exponent(const TraceSamples& samples, int max_log_power);

// largest log power carried by a non-zero-consistent coefficient
int log_degree(const AsymptoticExpansion& e);

// b3-type coefficient of the (2,1)-Levi trivial-class trace: third t^{1/2}
// derivative of the even function s -> int psi e^{-r^2(n(sy))/4s^2} a0(n(sy)) dy
// over the 2-plane, divided by 3!.  Vanishes by parity.
double c13_third_difference(const parametrix::KRep& nu, double h = 0.1, double tol = 1e-9);

// d^2/dx_i^2 a0(n(x e_i)) at 0 for the three coordinate directions of the
// full upper-triangular radical in GL(3)
std::array<double, 3> a0_second_derivatives(const parametrix::KRep& nu);

// c2 = a0(1) * int p2 e^{-|x|^2} + a1(1) pi^{3/2} + sum_i d2a0_i * pi^{3/2}/2
double c2_assembly(double a0_1, double a1_1, const std::array<double, 3>& d2a0,
                   double p2_integral);

}  // namespace torsionlab::asymptotics

#endif
