#ifndef TORSIONLAB_WEIGHTS_HPP
#define TORSIONLAB_WEIGHTS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "torsionlab/geometry.hpp"
#include "torsionlab/roots.hpp"

// Numerical realization of the non-invariant weight functions w_{M,V} on
// unipotent classes of GL(n): the conjugator equation, the v_P norms, the
// kappa_0 / rho exponents, the (G,M)-family limit and the sum over F(M).
//
// Conventions: the reference parabolic P_1 is always the standard one (block
// order 0,1,...,k-1).  pi = Id + X0 + Z with X0 the class representative in m
// and Z supported on the positions of n_1.

namespace torsionlab::weights {

using geometry::Matrix;
using geometry::Vector;

struct UnipotentDatum {
  roots::LeviComposition M;
  Matrix X0;  // strictly upper triangular, block diagonal w.r.t. M
};

struct PiElement {
  UnipotentDatum datum;
  Matrix Z;  // supported on n_1 positions
};

// Class representatives: "trivial" (X0 = 0) or "regular" (one Jordan block
// per M-block).
Matrix nilpotent_representative(const roots::LeviComposition& M, const std::string& label);
PiElement make_pi(const roots::LeviComposition& M, const std::string& label,
                  const Vector& z_coords);
PiElement scale_pi(const PiElement& pi, double s);       // pi_s = Id + s(pi - Id)
PiElement conjugate_pi(const PiElement& pi, const Matrix& k);  // k^{-1} pi k, diagonal k

// Unique n = Id + Y with Y supported on the n_1 positions of the standard
// parabolic solving a pi = n^{-1} (a u) n, for a in A_M given by per-block
// values.  Throws std::domain_error when a is not regular.
Matrix solve_conjugator(const std::vector<double>& a_block_values, const PiElement& pi);

// v_P(varpi_j, n) for the j-th P-dominant fundamental weight, by both routes:
// e^{-varpi(H_P(n))} and the extremal-vector (minor) norm.
struct VPResult {
  double via_H = 0.0;
  double via_minors = 0.0;
};
VPResult v_P_norm(int weight_index, const Matrix& n, const roots::ParabolicDatum& P);

// kappa_0 and rho for the root beta attached to the ordered block pair
// (block_a over block_b), from the log-log slope of v_{P_beta}^2 against
// |a^beta - 1| in the two-block subproblem with generic Z.
struct Kappa0Result {
  int kappa0 = 0;
  double rho = 0.0;
  double slope_residual = 0.0;
};
Kappa0Result estimate_kappa0(const UnipotentDatum& datum, int block_a, int block_b,
                             std::uint64_t seed = 7);

using RhoTable = std::map<std::pair<int, int>, double>;
RhoTable rho_table(const UnipotentDatum& datum, std::uint64_t seed = 7);

// log of lim_{a->1} prod_{beta in Phi_P cap Phi_{P1bar}} r_beta(varpi,u,a)
// times v_P(varpi, n(a)), by Richardson extrapolation along a geometric
// a-schedule.
struct WPLimit {
  double log_value = 0.0;
  double residual = 0.0;  // last extrapolation correction
};
WPLimit w_P_log_limit(const PiElement& pi, const roots::ParabolicDatum& P, int weight_index,
                      const RhoTable& rho);

struct WeightEvaluation {
  double value = 0.0;
  double lambda_spread = 0.0;           // relative spread across Lambda choices
  double max_extrapolation_residual = 0.0;
  std::vector<double> per_parabolic_L;  // L_P = log-derivative slopes, first Lambda
};

// (G,M)-family value w_M(1, pi) = (1/r!) sum_P (d^r/dt^r)|_0 e^{t L_P} / theta_P(Lambda).
WeightEvaluation w_M(const PiElement& pi, std::uint64_t seed = 7, int n_lambda = 3);

// w_{M,V}(pi) = sum over parabolics Q' in F(M) of the M_{Q'}-relative values;
// grouped by Levi, each part contributing a factor.
double w_M_class(const PiElement& pi, std::uint64_t seed = 7);

}  // namespace torsionlab::weights

#endif
