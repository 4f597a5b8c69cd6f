#ifndef TORSIONLAB_QUADRATURE_HPP
#define TORSIONLAB_QUADRATURE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

// Deterministic adaptive quadrature for Gaussian integrals with integrable
// logarithmic singularities,
//   int e^{-a||x||^2} p(x) prod_l (log|p_l(x)|)^{m_l} dx,
// plus a Monte Carlo oracle.  Dimensions up to 4.

namespace torsionlab::quadrature {

// Sparse multivariate polynomial, sum of coeff * prod x_i^{exps[i]}.
struct MultiPoly {
  struct Term {
    std::vector<int> exps;
    double coeff;
  };
  int dim = 0;
  std::vector<Term> terms;

  double eval(const std::vector<double>& x) const;
  int total_degree() const;
  static MultiPoly constant(int dim, double c);
  static MultiPoly monomial(int dim, const std::vector<int>& exps, double c = 1.0);
};

struct LogFactor {
  MultiPoly poly;
  int degree = 1;  // declared homogeneity degree
  int power = 1;   // exponent on log|poly|
};

struct LogGaussIntegrand {
  int dim = 1;
  double a = 1.0;
  MultiPoly poly;  // defaults to the constant 1 if terms empty
  std::vector<LogFactor> log_factors;

  static LogGaussIntegrand from_json(const std::string& json_text);
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long regions_used = 0;
  long singular_regions = 0;
  bool converged = true;
};

// General adaptive engine: embedded tensor Gauss-Legendre error estimates,
// error-heap region refinement, dyadic subdivision biased toward the zero
// sets of the optional singular factors, deterministic index-order reduction.
struct AdaptiveOptions {
  double tol = 1e-8;
  long max_regions = 200000;
  long min_regions = 0;    // forced initial subdivision; 0 = pick by dim
  int n_hi = 0, n_lo = 0;  // quadrature orders per axis; 0 = pick by dim
  std::vector<std::function<double(const std::vector<double>&)>> singular_factors;
};

QuadResult integrate_adaptive(int dim,
                              const std::function<double(const std::vector<double>&)>& f,
                              std::vector<double> lo, std::vector<double> hi,
                              const AdaptiveOptions& opt = {});

// Signed-log integral with the factors' declared powers.  Throws on a
// non-homogeneous or identically-zero log factor, or dim > 4.
QuadResult integrate_signed(const LogGaussIntegrand& I, double tol);

// Same but with |log|p_l|| in place of log|p_l| (powers still applied).
QuadResult integrate(const LogGaussIntegrand& I, double tol);

// Importance sampling from N(0, 1/(2a)) per coordinate; deterministic in seed.
struct MCResult {
  double estimate = 0.0;
  double stderr_est = 0.0;
  long n_samples = 0;
};
MCResult mc_oracle(const LogGaussIntegrand& I, std::uint64_t seed, long n_samples);

// Plain uniform Monte Carlo over a box, for cross-checking arbitrary
// integrands; deterministic in seed.
MCResult mc_box(int dim, const std::function<double(const std::vector<double>&)>& f,
                const std::vector<double>& lo, const std::vector<double>& hi,
                std::uint64_t seed, long n_samples);

// True iff every log factor is homogeneous of its declared degree (sampled
// scaling test) and not identically zero.
bool finiteness_guard(const LogGaussIntegrand& I);

// Truncation radius making the Gaussian tail contribution < tol/10.
double truncation_radius(const LogGaussIntegrand& I, double tol);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace torsionlab::quadrature

#endif
