#include "torsionlab/parametrix.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <vector>

namespace torsionlab::parametrix {

double binomial(int m, int q) {
  if (q < 0 || q > m) return 0.0;
  double r = 1.0;
  for (int i = 0; i < q; ++i) r = r * (m - i) / (i + 1);
  return r;
}

KRep KRep::trivial(int n) { return {Kind::Trivial, n, 0, 1, {}}; }

KRep KRep::lambda_p_adjoint(int n, int p) {
  int dimS = n * (n + 1) / 2 - 1;
  if (p < 0 || p > dimS) throw std::invalid_argument("lambda_p_adjoint: p out of range");
  return {Kind::LambdaPAdjoint, n, p, static_cast<int>(binomial(dimS, p)), {}};
}

KRep KRep::external(int n, int dim, std::function<double(const Matrix&)> trace) {
  return {Kind::External, n, 0, dim, std::move(trace)};
}

double KRep::trace(const Matrix& k) const {
  switch (kind) {
    case Kind::Trivial: return 1.0;
    case Kind::LambdaPAdjoint: return nu_p_trace(k, p);
    case Kind::External: return external_trace(k);
  }
  throw std::logic_error("KRep::trace: bad kind");
}

Matrix ad_p_matrix(const Matrix& k) {
  const int n = static_cast<int>(k.rows());
  if ((k.transpose() * k - Matrix::Identity(n, n)).norm() > 1e-10)
    throw std::invalid_argument("ad_p_matrix: input not orthogonal");
  auto basis = geometry::symmetric_traceless_basis(n);
  const int N = static_cast<int>(basis.size());
  Matrix A(N, N);
  for (int j = 0; j < N; ++j) {
    Matrix img = k * basis[j] * k.transpose();
    for (int i = 0; i < N; ++i) A(i, j) = (basis[i] * img).trace();
  }
  return A;
}

double nu_p_trace(const Matrix& k, int p) {
  Matrix A = ad_p_matrix(k);
  const int N = static_cast<int>(A.rows());
  if (p < 0 || p > N) throw std::invalid_argument("nu_p_trace: p out of range");
  Eigen::EigenSolver<Matrix> es(A);
  // elementary symmetric polynomial e_p of the eigenvalues
  std::vector<std::complex<double>> c(N + 1, 0.0);
  c[0] = 1.0;
  for (int i = 0; i < N; ++i)
    for (int j = std::min(i + 1, N); j >= 1; --j) c[j] += es.eigenvalues()[i] * c[j - 1];
  return c[p].real();
}

double a0_coefficient(const Matrix& g, const KRep& nu) {
  auto polar = geometry::cartan_polar(g);
  return nu.trace(polar.k) / std::sqrt(geometry::exp_jacobian(polar.Y));
}

double a1_identity_coefficient(int p, int dim_tau, double R) {
  return -(R * dim_tau / 6.0) * (binomial(5, p) - 6.0 * binomial(3, p - 1));
}

double scalar_curvature(int n) {
  auto basis = geometry::symmetric_traceless_basis(n);
  // j(tE) is even in t, so d^2/dt^2 j(tE)|_0 = 2 (j(hE) - 1)/h^2 + O(h^2);
  // Richardson-extrapolate over h and h/2.
  auto d2 = [](const Matrix& E, double h) {
    return 2.0 * (geometry::exp_jacobian(h * E) - 1.0) / (h * h);
  };
  double R = 0.0;
  const double h = 1e-2;
  for (const auto& E : basis) R += (4.0 * d2(E, h / 2) - d2(E, h)) / 3.0;
  return -3.0 * R;
}

double cutoff_psi(double r, const CutoffConfig& cfg) {
  if (r <= cfg.a) return 1.0;
  if (r >= cfg.b) return 0.0;
  double s = (r - cfg.a) / (cfg.b - cfg.a);
  return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double h_t_parametrix(double t, const Matrix& g, const KRep& nu, int order,
                      double R, int dim_tau, const CutoffConfig& cfg) {
  if (order > 1) throw std::invalid_argument("h_t_parametrix: only orders 0 and 1 supported");
  if (!(t > 0.0)) throw std::invalid_argument("h_t_parametrix: t must be positive");
  const int n = nu.n;
  const int d = n * (n + 1) / 2 - 1;
  double r = geometry::geodesic_distance(g);
  double psi = cutoff_psi(r, cfg);
  if (psi == 0.0) return 0.0;
  double series = a0_coefficient(g, nu);
  if (order >= 1) series += a1_identity_coefficient(nu.p, dim_tau, R) * t;
  return std::pow(4.0 * M_PI * t, -0.5 * d) * psi * std::exp(-r * r / (4.0 * t)) * series;
}

namespace {

// Y1 for nilpotent direction dir in {0: (0,1), 1: (0,2), 2: (1,2)}: the
// symmetric traceless matrix fixed by rotations in that coordinate plane.
Matrix y1_vector(int dir) {
  Matrix Y = Matrix::Zero(3, 3);
  double c = 1.0 / std::sqrt(6.0);
  if (dir == 0) { Y(0, 0) = c; Y(1, 1) = c; Y(2, 2) = -2 * c; }
  else if (dir == 1) { Y(0, 0) = c; Y(1, 1) = -2 * c; Y(2, 2) = c; }
  else if (dir == 2) { Y(0, 0) = -2 * c; Y(1, 1) = c; Y(2, 2) = c; }
  else throw std::invalid_argument("direction must be 0, 1 or 2");
  return Y;
}

Matrix nilpotent_direction(double u, int dir) {
  Matrix g = Matrix::Identity(3, 3);
  if (dir == 0) g(0, 1) = u;
  else if (dir == 1) g(0, 2) = u;
  else g(1, 2) = u;
  return g;
}

// orthonormal basis of the orthocomplement of y in R^N, as columns
Matrix complement_basis(const geometry::Vector& y) {
  const int N = static_cast<int>(y.size());
  Eigen::HouseholderQR<Matrix> qr(y);
  Matrix Q = qr.householderQ();
  return Q.rightCols(N - 1);
}

struct RestrictedT {
  Matrix T;                 // 4x4 restriction to S0
  double invariance_defect; // |Ad(k(u)) Y1 - Y1|
};

RestrictedT restricted_T(double u, int dir) {
  auto polar = geometry::cartan_polar(nilpotent_direction(u, dir));
  Matrix A = ad_p_matrix(polar.k);
  auto basis = geometry::symmetric_traceless_basis(3);
  Matrix Y1 = y1_vector(dir);
  geometry::Vector y(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) y[static_cast<int>(i)] = (basis[i] * Y1).trace();
  Matrix B = complement_basis(y);
  return {B.transpose() * A * B, (A * y - y).norm()};
}

}  // namespace

double det_id_minus_T(double u, double lambda, int direction) {
  auto rt = restricted_T(u, direction);
  const int N = static_cast<int>(rt.T.rows());
  return (lambda * Matrix::Identity(N, N) - rt.T).determinant();
}

SecondDerivativeReport second_derivative_check() {
  SecondDerivativeReport rep;
  const double lambdas[] = {0.3, 1.0, 1.7, 2.5};
  for (int dir = 0; dir < 3; ++dir) {
    for (double u : {0.1, 0.3}) {
      rep.max_invariance_defect =
          std::max(rep.max_invariance_defect, restricted_T(u, dir).invariance_defect);
    }
    for (double l : lambdas) {
      double f0 = det_id_minus_T(0.0, l, dir);
      rep.f_lambda_u0_error =
          std::max(rep.f_lambda_u0_error, std::abs(f0 - std::pow(l - 1.0, 4)));
      const double h1 = 1e-4;
      double d1 = (det_id_minus_T(h1, l, dir) - det_id_minus_T(-h1, l, dir)) / (2 * h1);
      rep.max_abs_first_derivative = std::max(rep.max_abs_first_derivative, std::abs(d1));
    }
    // second derivative at lambda = 1, Richardson over h and h/2
    auto d2 = [dir](double h) {
      return (det_id_minus_T(h, 1.0, dir) - 2.0 * det_id_minus_T(0.0, 1.0, dir) +
              det_id_minus_T(-h, 1.0, dir)) / (h * h);
    };
    const double h = 2e-3;
    double d2r = (4.0 * d2(h / 2) - d2(h)) / 3.0;
    rep.max_abs_second_derivative = std::max(rep.max_abs_second_derivative, std::abs(d2r));
  }
  return rep;
}

SurrogateKernel SurrogateKernel::gaussian(int d) {
  SurrogateKernel k;
  k.d = d;
  k.F = [d](double r2, double t) {
    return std::pow(4.0 * M_PI * t, -0.5 * d) * std::exp(-r2 / (4.0 * t));
  };
  return k;
}

SurrogateKernel SurrogateKernel::from_json(const std::string& json_text) {
  auto j = nlohmann::json::parse(json_text);
  std::string type = j.at("type").get<std::string>();
  int d = j.at("d").get<int>();
  if (type == "gaussian") return gaussian(d);
  if (type == "table") {
    auto grid = j.at("r2_grid").get<std::vector<double>>();
    auto vals = j.at("values").get<std::vector<double>>();
    if (grid.size() != vals.size() || grid.empty())
      throw std::invalid_argument("SurrogateKernel: grid/values size mismatch");
    SurrogateKernel k;
    k.d = d;
    k.F = [d, grid, vals](double r2, double t) {
      // piecewise-linear multiplier on the Gaussian profile
      double m;
      if (r2 <= grid.front()) m = vals.front();
      else if (r2 >= grid.back()) m = vals.back();
      else {
        auto it = std::upper_bound(grid.begin(), grid.end(), r2);
        std::size_t i = static_cast<std::size_t>(it - grid.begin());
        double w = (r2 - grid[i - 1]) / (grid[i] - grid[i - 1]);
        m = (1.0 - w) * vals[i - 1] + w * vals[i];
      }
      return m * std::pow(4.0 * M_PI * t, -0.5 * d) * std::exp(-r2 / (4.0 * t));
    };
    return k;
  }
  throw std::invalid_argument("SurrogateKernel: unknown type " + type);
}

}  // namespace torsionlab::parametrix
