#ifndef TORSIONLAB_PARAMETRIX_HPP
#define TORSIONLAB_PARAMETRIX_HPP

#include <functional>
#include <string>

#include "torsionlab/geometry.hpp"

// Heat-kernel parametrix for Bochner-Laplace operators on SL(n,R)/SO(n):
// the K-representations Lambda^p of the isotropy action on p, the leading
// parametrix coefficients, and the 4x4 determinant computations behind the
// second-derivative cancellation at the identity (n = 3).

namespace torsionlab::parametrix {

using geometry::Matrix;
using geometry::Vector;

double binomial(int m, int q);  // 0 outside 0 <= q <= m

// Representation of SO(n) used to twist the flat Laplacian.
struct KRep {
  enum class Kind { Trivial, LambdaPAdjoint, External };
  Kind kind = Kind::Trivial;
  int n = 0;    // rank of the ambient SL(n)
  int p = 0;    // exterior power (LambdaPAdjoint only)
  int dim = 1;
  std::function<double(const Matrix&)> external_trace;

  static KRep trivial(int n);
  static KRep lambda_p_adjoint(int n, int p);
  static KRep external(int n, int dim, std::function<double(const Matrix&)> trace);

  double trace(const Matrix& k) const;
};

// Matrix of Y -> k Y k^T on symmetric traceless matrices, in the fixed
// orthonormal basis of geometry::symmetric_traceless_basis.  Throws if k is
// not orthogonal to 1e-10.
Matrix ad_p_matrix(const Matrix& k);

// p-th elementary symmetric polynomial of the eigenvalues of ad_p_matrix(k),
// i.e. tr Lambda^p Ad_p(k).  Throws if p outside [0, dim S].
double nu_p_trace(const Matrix& k, int p);

// a_0(g) = tr nu(k(g)) * j(Y(g))^{-1/2}.
double a0_coefficient(const Matrix& g, const KRep& nu);

// a_1 at the identity for nu_p on SL(3): -(R dim_tau / 6) [C(5,p) - 6 C(3,p-1)].
double a1_identity_coefficient(int p, int dim_tau, double R);

// Scalar curvature of SL(n,R)/SO(n) in the trace-form metric, by a
// finite-difference second derivative of the exponential-map Jacobian:
// R = -3 sum_a (d^2/dt^2)|_0 j(t E_a) over an orthonormal basis of p.
double scalar_curvature(int n);

struct CutoffConfig {
  double a = 0.5;  // psi = 1 on [0, a]
  double b = 1.0;  // psi = 0 on [b, inf)
};

// Quintic smoothstep cutoff in the geodesic radius.
double cutoff_psi(double r, const CutoffConfig& cfg = {});

// (4 pi t)^{-d/2} psi(r) exp(-r^2/4t) (a_0(g) + [order>=1] a_1(Id) t),
// d = dim SL(n)/SO(n).  Order 1 uses the identity value of a_1 and is only
// meaningful near the identity; order > 1 throws.
double h_t_parametrix(double t, const Matrix& g, const KRep& nu, int order,
                      double R = 0.0, int dim_tau = 1, const CutoffConfig& cfg = {});

// f(lambda, u) = det(lambda Id - T(u)) with T(u) the restriction of
// Ad_p(k(n(u e_dir))) to the orthocomplement S0 of the rotation-invariant
// vector Y1 of the given nilpotent direction (n = 3; dir in {0,1,2}).
double det_id_minus_T(double u, double lambda, int direction = 0);

struct SecondDerivativeReport {
  double max_abs_first_derivative = 0.0;   // max over dirs, sampled lambda
  double max_abs_second_derivative = 0.0;  // at lambda = 1, max over dirs
  double f_lambda_u0_error = 0.0;          // max |f(lambda,0) - (lambda-1)^4|
  double max_invariance_defect = 0.0;      // max |Ad(k(u)) Y1 - Y1|
};

SecondDerivativeReport second_derivative_check();

// Pluggable radial kernel profile F(r^2, t), JSON-loadable:
// {"type":"gaussian","d":N} or {"type":"table","d":N,"r2_grid":[...],"values":[...]}.
struct SurrogateKernel {
  int d = 1;
  std::function<double(double r2, double t)> F;

  static SurrogateKernel gaussian(int d);
  static SurrogateKernel from_json(const std::string& json_text);
  double operator()(double r2, double t) const { return F(r2, t); }
};

}  // namespace torsionlab::parametrix

#endif
