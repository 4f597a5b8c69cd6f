#ifndef TORSIONLAB_ORBITAL_HPP
#define TORSIONLAB_ORBITAL_HPP

#include <cstdint>
#include <functional>
#include <string>

#include "torsionlab/parametrix.hpp"
#include "torsionlab/quadrature.hpp"
#include "torsionlab/roots.hpp"

// Weighted and invariant orbital integrals for GL(2)/GL(3): the explicit
// low-rank weight catalog (log|x|, log(y^2+z^2), log|xz|, the quadratic-log
// minimal-Levi weight), the finite-order-class integrals, and the generic
// path with the pointwise-evaluated Arthur weight.

namespace torsionlab::orbital {

using geometry::Matrix;

enum class Group { GL2, GL3 };

// Test function evaluated at a unipotent coordinate point x and the group
// element it parameterizes.
struct Kernel {
  enum class Kind { GaussianCoords, Radial } kind = Kind::GaussianCoords;
  double a = 1.0;                       // exp(-a ||x||^2) on coordinates
  parametrix::SurrogateKernel profile;  // radial profile in r^2(g)
  double t = 1.0;

  static Kernel gaussian(double a);
  static Kernel radial(parametrix::SurrogateKernel profile, double t);
  double operator()(const std::vector<double>& x, const Matrix& g) const;
};

struct OrbitalResult {
  double value = 0.0;
  quadrature::QuadResult diagnostics;
};

// Explicit weighted integrals (GL(2) minimal Levi; GL(3) M1 trivial and
// regular-in-M classes; GL(3) minimal Levi trivial class).
struct ExplicitEntry {
  Group group = Group::GL2;
  std::vector<int> levi_blocks;
  std::string class_label;  // "trivial" or "regular"
};

int explicit_dimension(const ExplicitEntry& e);
Matrix explicit_embedding(const ExplicitEntry& e, const std::vector<double>& x);
double explicit_weight(const ExplicitEntry& e, const std::vector<double>& x);
// The same integrals with a coordinate-Gaussian kernel, as quadrature specs
// (one per additive weight term) for closed-form and Monte Carlo work.
std::vector<quadrature::LogGaussIntegrand> explicit_integrands(const ExplicitEntry& e, double a);

OrbitalResult j_explicit(const ExplicitEntry& e, const Kernel& f, double tol = 1e-7);

// Invariant integral over the Richardson radical of the class
// ("trivial" -> f(Id), "subregular" (GL3), "regular").
OrbitalResult j_invariant(Group g, const std::string& class_label, const Kernel& f,
                          double tol = 1e-7);

struct FiniteOrderConfig {
  double a1 = 1.0, a2 = 1.0;  // split-class linear-combination constants
  double c_log = 1.0, c_const = 0.0;  // coefficients of the log|a| line (GL3 minimal Levi)
  double tol = 1e-6;
};

// alpha_i = sqrt(2) sin(theta_i), theta_2 = pi/2, theta_3 = pi/3
double alpha_elliptic(int i);
// a^{-1} sigma_i^{sign} a for a = diag(e^X, e^{-X})
Matrix elliptic_conjugate_gl2(int i, int sign, double X);
// r^2 = 4 Y^2 with Y the KAK radial part of elliptic_conjugate_gl2, the
// normalization under which r^2 = 8 alpha_i^2 X^2 + O(X^4)
double elliptic_r2(int i, int sign, double X);

// class labels: "sigma1", "sigma2+", "sigma2-", "sigma3+", "sigma3-"
OrbitalResult j_finite_order_gl2(const std::string& label, const Kernel& f,
                                 const FiniteOrderConfig& cfg = {});

// classes "sigma2" / "sigma3" with signs (s1, s2) take op "JM" (weighted by
// log(1+||w||^2), w = (id - m^{-1} sigma m)^{-1}(x,y)) or "JG" (invariant);
// class "sigma1" with sign s1 takes ops "JG_U" (2-d), "JG_u1" (3-d),
// "JM0" (3-d, log(1+x^2+y^2) plus the configured log|a| line),
// "JM_U" (2-d weighted), "JM_u1" (3-d weighted).
OrbitalResult j_finite_order_gl3(const std::string& label, int s1, int s2,
                                 const std::string& op, const Kernel& f,
                                 const FiniteOrderConfig& cfg = {});

// J_M(class, f) with the pointwise generic weight w_{M,V}.
OrbitalResult j_generic(const roots::LeviComposition& M, const std::string& class_label,
                        const Kernel& f, double tol = 1e-3, std::uint64_t seed = 7);

}  // namespace torsionlab::orbital

#endif
