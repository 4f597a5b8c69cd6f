#include "torsionlab/asymptotics.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "torsionlab/geometry.hpp"

namespace torsionlab::asymptotics {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Basis {
  std::vector<std::pair<double, int>> funcs;  // (exponent, log power)
};

Basis lattice(int d, int k, int max_order, int max_log_power) {
  Basis b;
  for (int j = 0; j <= max_order; ++j)
    for (int i = 0; i <= max_log_power; ++i)
      b.funcs.push_back({-0.5 * (d - k) + 0.5 * j, i});
  return b;
}

}  // namespace

AsymptoticExpansion fit_expansion(const TraceSamples& samples, int d, int k, int max_order,
                                  int max_log_power) {
  Basis basis = lattice(d, k, max_order, max_log_power);
  const int m = static_cast<int>(samples.size());
  const int n = static_cast<int>(basis.funcs.size());
  if (m < 2 * n) throw std::invalid_argument("fit_expansion: need at least 2x samples per basis function");
  MatrixXd A(m, n);
  VectorXd b(m);
  double ymax = 0.0;
  for (const auto& [t, y] : samples) ymax = std::max(ymax, std::abs(y));
  for (int r = 0; r < m; ++r) {
    auto [t, y] = samples[r];
    if (!(t > 0)) throw std::invalid_argument("fit_expansion: t must be positive");
    // floor the relative weights so a sample near a zero crossing of y cannot
    // dominate the system and wreck its conditioning
    double w = 1.0 / (std::abs(y) + 1e-6 * ymax + 1e-300);
    for (int c = 0; c < n; ++c) {
      auto [alpha, i] = basis.funcs[c];
      A(r, c) = w * std::pow(t, alpha) * std::pow(std::log(t), i);
    }
    b[r] = w * y;
  }
  // column equilibration keeps the SVD conditioning scale-free
  VectorXd colnorm(n);
  for (int c = 0; c < n; ++c) {
    colnorm[c] = A.col(c).norm();
    if (!(colnorm[c] > 0)) colnorm[c] = 1.0;
    A.col(c) /= colnorm[c];
  }
  Eigen::BDCSVD<MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double smax = svd.singularValues()(0), smin = svd.singularValues()(n - 1);
  if (!(smin > 0) || smax / smin > 1e13)
    throw std::runtime_error("fit_expansion: basis ill-conditioned; extend the t-grid or reduce the order");
  VectorXd coef = svd.solve(b);
  VectorXd resid = A * coef - b;
  double sigma2 = resid.squaredNorm() / std::max(1, m - n);
  AsymptoticExpansion out;
  out.d = d;
  out.k = k;
  out.residual = std::sqrt(resid.squaredNorm() / m);
  out.condition_number = smax / smin;
  const MatrixXd& V = svd.matrixV();
  for (int c = 0; c < n; ++c) {
    ExpansionTerm term;
    term.exponent = basis.funcs[c].first;
    term.log_power = basis.funcs[c].second;
    term.coefficient = coef[c] / colnorm[c];
    double var = 0.0;
    for (int j = 0; j < n; ++j) {
      double s = svd.singularValues()(j);
      var += V(c, j) * V(c, j) / (s * s);
    }
    term.std_error = std::sqrt(var * sigma2) / colnorm[c];
    term.zero_consistent = std::abs(term.coefficient) < 10.0 * term.std_error;
    out.terms.push_back(term);
  }
  return out;
}

double synthesize(const AsymptoticExpansion& e, double t) {
  double v = 0.0;
  for (const auto& term : e.terms)
    v += term.coefficient * std::pow(t, term.exponent) * std::pow(std::log(t), term.log_power);
  return v;
}

double leading_exponent(const TraceSamples& samples, int max_log_power) {
  // fit y ~ sum_{q=0,1} t^{p+q/2} sum_i c_{qi} (log t)^i on the small-t half,
  // scanning p; the residual minimum locates the true leading power
  TraceSamples half(samples.begin(), samples.begin() + samples.size() / 2 + 1);
  const int m = static_cast<int>(half.size());
  const int n = 2 * (max_log_power + 1);
  if (m < n + 2) throw std::invalid_argument("leading_exponent: too few samples");
  auto residual_at = [&](double p) {
    MatrixXd A(m, n);
    VectorXd b(m);
    for (int r = 0; r < m; ++r) {
      auto [t, y] = half[r];
      double w = 1.0 / (std::abs(y) + 1e-300);
      int c = 0;
      for (int q = 0; q <= 1; ++q)
        for (int i = 0; i <= max_log_power; ++i)
          A(r, c++) = w * std::pow(t, p + 0.5 * q) * std::pow(std::log(t), i);
      b[r] = w * y;
    }
    VectorXd coef = A.colPivHouseholderQr().solve(b);
    return (A * coef - b).norm();
  };
  double best_p = 0.0, best_r = 1e300;
  for (double p = -4.0; p <= 0.5 + 1e-9; p += 0.01) {
    double r = residual_at(p);
    if (r < best_r) {
      best_r = r;
      best_p = p;
    }
  }
  // parabolic refinement
  double h = 0.01;
  double rm = residual_at(best_p - h), rp = residual_at(best_p + h);
  double denom = rm - 2 * best_r + rp;
  if (denom > 0) best_p += 0.5 * h * (rm - rp) / denom;
  return best_p;
}

int log_degree(const AsymptoticExpansion& e) {
  int deg = 0;
  for (const auto& term : e.terms)
    if (!term.zero_consistent) deg = std::max(deg, term.log_power);
  return deg;
}

double c13_third_difference(const parametrix::KRep& nu, double h, double tol) {
  auto F = [&](double s) {
    auto integrand = [&](const std::vector<double>& y) {
      geometry::Matrix g = geometry::Matrix::Identity(3, 3);
      g(0, 2) = s * y[0];
      g(1, 2) = s * y[1];
      double r2 = geometry::geodesic_distance_squared(g);
      double psi = parametrix::cutoff_psi(std::sqrt(r2), {});
      if (psi == 0.0) return 0.0;
      return psi * std::exp(-r2 / (4.0 * s * s)) * parametrix::a0_coefficient(g, nu);
    };
    double R = 1.0 / std::abs(s);
    quadrature::AdaptiveOptions opt;
    opt.tol = tol;
    opt.max_regions = 40000;
    return quadrature::integrate_adaptive(2, integrand, {-R, -R}, {R, R}, opt).value;
  };
  double third = (F(2 * h) - 2 * F(h) + 2 * F(-h) - F(-2 * h)) / (2 * h * h * h);
  return third / 6.0;
}

std::array<double, 3> a0_second_derivatives(const parametrix::KRep& nu) {
  std::array<std::pair<int, int>, 3> pos{{{0, 1}, {0, 2}, {1, 2}}};
  std::array<double, 3> out{};
  double a0_id = parametrix::a0_coefficient(geometry::Matrix::Identity(3, 3), nu);
  for (int i = 0; i < 3; ++i) {
    auto a0 = [&](double x) {
      geometry::Matrix g = geometry::Matrix::Identity(3, 3);
      g(pos[i].first, pos[i].second) = x;
      return parametrix::a0_coefficient(g, nu);
    };
    auto d2 = [&](double h) { return (a0(h) - 2 * a0_id + a0(-h)) / (h * h); };
    const double h = 1e-2;
    out[i] = (4.0 * d2(h / 2) - d2(h)) / 3.0;
  }
  return out;
}

double c2_assembly(double a0_1, double a1_1, const std::array<double, 3>& d2a0,
                   double p2_integral) {
  const double pi32 = std::pow(M_PI, 1.5);
  double v = a0_1 * p2_integral + a1_1 * pi32;
  for (double d2 : d2a0) v += d2 * pi32 / 2.0;
  return v;
}

}  // namespace torsionlab::asymptotics
