#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <random>

#include "torsionlab/geometry.hpp"
#include "torsionlab/parametrix.hpp"
#include "torsionlab/quadrature.hpp"
#include "torsionlab/roots.hpp"

using namespace torsionlab;
using geometry::Matrix;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kGamma = 0.57721566490153286061;

roots::ParabolicDatum standard_p(std::vector<int> blocks) {
  roots::ParabolicDatum P;
  P.levi.blocks = std::move(blocks);
  P.levi.kind = roots::GroupKind::GL;
  P.block_order.resize(P.levi.num_blocks());
  std::iota(P.block_order.begin(), P.block_order.end(), 0);
  return P;
}

Matrix random_sl(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Matrix g(n, n);
  double det = 0.0;
  do {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = U(rng);
    det = g.determinant();
  } while (std::abs(det) < 0.05);
  if (det < 0) g.row(0) *= -1.0;
  return g / std::pow(std::abs(det), 1.0 / n);
}

Matrix sym_exp(const Matrix& Y) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(Y);
  return es.eigenvectors() * es.eigenvalues().array().exp().matrix().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace

TEST_CASE("levi enumeration counts") {
  auto l4 = roots::enumerate_levis(4, roots::GroupKind::GL);
  CHECK(l4.size() == 8);
  for (const auto& M : l4) CHECK(M.rank() == 4);

  roots::LeviComposition M211{{2, 1, 1}, roots::GroupKind::GL};
  CHECK(roots::parabolics_containing(M211).size() == 6);

  roots::LeviComposition M111{{1, 1, 1}, roots::GroupKind::GL};
  CHECK(roots::levis_containing(M111).size() == 5);  // Bell(3)
  CHECK(roots::count_parabolics_with_levi_containing(M111) == 13);  // 1 + 3*2 + 6
}

TEST_CASE("root datum duality is exact") {
  for (auto blocks : {std::vector<int>{1, 1, 1}, std::vector<int>{2, 1}}) {
    auto P = standard_p(blocks);
    auto rd = roots::simple_roots_coroots(P);
    for (std::size_t i = 0; i < rd.dual_weights.size(); ++i) {
      Rational tr(0);
      for (const auto& q : rd.dual_weights[i]) tr += q;
      CHECK(tr == Rational(0));
      for (std::size_t j = 0; j < rd.simple_coroots.size(); ++j)
        CHECK(dot(rd.dual_weights[i], rd.simple_coroots[j]) == Rational(i == j ? 1 : 0));
    }
  }
}

TEST_CASE("tau and adjacency") {
  auto P = standard_p({1, 1});
  RationalVec Xpos{Rational(1), Rational(-1)}, Xneg{Rational(-1), Rational(1)};
  CHECK(roots::tau_and_hat_tau(P, Xpos).first);
  CHECK(!roots::tau_and_hat_tau(P, Xneg).first);

  roots::ParabolicDatum Q = P;
  Q.block_order = {1, 0};
  auto adj = roots::adjacency(P, Q);
  REQUIRE(adj.has_value());
  CHECK(*adj == roots::block_pair_root(P.levi, 0, 1));
  CHECK(!roots::adjacency(P, P).has_value());
}

TEST_CASE("covolume and theta_P") {
  auto P = standard_p({1, 1});
  CHECK(roots::covolume_squared(P) == Rational(2));
  RationalVec lam{Rational(3), Rational(-3)};
  CHECK(roots::theta_P(P, lam) > 0.0);
}

TEST_CASE("decomposition roundtrips") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + trial % 2;
    Matrix g = random_sl(n, rng);
    auto pol = geometry::cartan_polar(g);
    CHECK((sym_exp(pol.Y) * pol.k - g).norm() < 1e-10);
    CHECK(std::abs(pol.Y.trace()) < 1e-10);
    auto kk = geometry::kak(g);
    Matrix mid = kk.H.array().exp().matrix().asDiagonal();
    CHECK((kk.k1 * mid * kk.k2 - g).norm() < 1e-10);
  }
}

TEST_CASE("exp jacobian against finite-difference metric volume") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-0.6, 0.6);
  for (int n : {2, 3}) {
    auto basis = geometry::symmetric_traceless_basis(n);
    const int d = static_cast<int>(basis.size());
    for (int trial = 0; trial < 4; ++trial) {
      Matrix Y = Matrix::Zero(n, n);
      for (const auto& E : basis) Y += U(rng) * E;
      // isometric model: Y -> exp(2Y) in SPD(n) with metric (1/4) tr(S^-1 A S^-1 B)
      Matrix S = sym_exp(2.0 * Y);
      Matrix Sinv = S.inverse();
      const double h = 1e-5;
      std::vector<Matrix> D;
      for (const auto& E : basis)
        D.push_back((sym_exp(2.0 * (Y + h * E)) - sym_exp(2.0 * (Y - h * E))) / (2.0 * h));
      Matrix G(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) G(i, j) = 0.25 * (Sinv * D[i] * Sinv * D[j]).trace();
      double oracle = std::sqrt(G.determinant());
      CHECK(geometry::exp_jacobian(Y) == doctest::Approx(oracle).epsilon(1e-5));
    }
  }
}

TEST_CASE("geodesic distance: closed form, invariance, bounds") {
  for (double x = -5.0; x <= 5.0; x += 0.25) {
    Matrix g = Matrix::Identity(3, 3);
    g(0, 1) = x;
    double q = x * x;
    double lam = 1.0 + q / 2.0 + std::sqrt(q + q * q / 4.0);
    CHECK(std::abs(geometry::geodesic_distance_squared(g) - 2.0 * std::log(lam) * std::log(lam)) <
          1e-10);
  }
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix g = random_sl(3, rng);
    Matrix k1 = geometry::cartan_polar(random_sl(3, rng)).k;
    Matrix k2 = geometry::cartan_polar(random_sl(3, rng)).k;
    CHECK(geometry::geodesic_distance(k1 * g * k2) ==
          doctest::Approx(geometry::geodesic_distance(g)).epsilon(1e-10));
  }
  auto P1 = standard_p({1, 1, 1});
  std::vector<Eigen::VectorXd> samples;
  std::normal_distribution<double> N(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    Eigen::VectorXd v(3);
    for (int c = 0; c < 3; ++c) v[c] = N(rng);
    samples.push_back(2.0 * v / v.norm());
  }
  auto rep = geometry::taylor_and_bound_checks(P1, samples);
  CHECK(rep.arcsinh_infimum > 0.2);
  CHECK(rep.log_infimum > 0.2);
}

TEST_CASE("isotropy representation matrices") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix k = geometry::cartan_polar(random_sl(3, rng)).k;
    if (k.determinant() < 0) k.row(0) *= -1.0;
    Matrix A = parametrix::ad_p_matrix(k);
    CHECK((A.transpose() * A - Matrix::Identity(5, 5)).norm() < 1e-9);
    // elementary symmetric oracle: sum of principal p x p minors
    for (int p = 0; p <= 5; ++p) {
      double minors = 0.0;
      for (int mask = 0; mask < 32; ++mask) {
        if (__builtin_popcount(mask) != p) continue;
        std::vector<int> idx;
        for (int b = 0; b < 5; ++b)
          if (mask & (1 << b)) idx.push_back(b);
        Matrix sub(p, p);
        for (int i = 0; i < p; ++i)
          for (int j = 0; j < p; ++j) sub(i, j) = A(idx[i], idx[j]);
        minors += p == 0 ? 1.0 : sub.determinant();
      }
      CHECK(parametrix::nu_p_trace(k, p) == doctest::Approx(minors).epsilon(1e-8));
    }
  }
  // restricted SO(2) character: weights -2..2
  for (double th : {0.3, 1.1, 2.5}) {
    Matrix k = Matrix::Identity(3, 3);
    k(0, 0) = std::cos(th);
    k(0, 1) = -std::sin(th);
    k(1, 0) = std::sin(th);
    k(1, 1) = std::cos(th);
    CHECK(parametrix::nu_p_trace(k, 1) ==
          doctest::Approx(1.0 + 2.0 * std::cos(th) + 2.0 * std::cos(2.0 * th)).epsilon(1e-10));
  }
}

TEST_CASE("parametrix coefficients") {
  auto nu = parametrix::KRep::lambda_p_adjoint(3, 1);
  CHECK(nu.dim == 5);
  CHECK(parametrix::a0_coefficient(Matrix::Identity(3, 3), nu) == doctest::Approx(5.0));

  // alternating-sum cancellation of the a1 inputs
  double s = 0.0;
  for (int p = 0; p <= 5; ++p)
    s += (p % 2 ? -1.0 : 1.0) * p * parametrix::a1_identity_coefficient(p, 2, -1.7);
  CHECK(std::abs(s) < 1e-10);

  CHECK(parametrix::binomial(5, 2) == doctest::Approx(10.0));
  CHECK(parametrix::binomial(3, -1) == doctest::Approx(0.0));

  // scalar curvature vs eigenvalue-gap oracle
  for (int n : {2, 3}) {
    double oracle = 0.0;
    for (const auto& E : geometry::symmetric_traceless_basis(n)) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(E);
      auto lam = es.eigenvalues();
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) oracle -= (lam[i] - lam[j]) * (lam[i] - lam[j]);
    }
    CHECK(parametrix::scalar_curvature(n) == doctest::Approx(oracle).epsilon(1e-5));
  }
  CHECK(parametrix::scalar_curvature(2) == doctest::Approx(-4.0).epsilon(1e-5));
}

TEST_CASE("cutoff and parametrix evaluation") {
  CHECK(parametrix::cutoff_psi(0.3, {}) == doctest::Approx(1.0));
  CHECK(parametrix::cutoff_psi(1.2, {}) == doctest::Approx(0.0));
  CHECK(parametrix::cutoff_psi(0.7, {}) > 0.0);
  CHECK(parametrix::cutoff_psi(0.7, {}) < 1.0);

  auto nu = parametrix::KRep::trivial(3);
  double t = 0.01;
  double v = parametrix::h_t_parametrix(t, Matrix::Identity(3, 3), nu, 0);
  CHECK(v == doctest::Approx(std::pow(4.0 * kPi * t, -2.5)).epsilon(1e-12));
  CHECK_THROWS(parametrix::h_t_parametrix(t, Matrix::Identity(3, 3), nu, 2));

  auto sk = parametrix::SurrogateKernel::from_json("{\"type\":\"gaussian\",\"d\":3}");
  auto ref = parametrix::SurrogateKernel::gaussian(3);
  CHECK(sk(0.7, 0.2) == doctest::Approx(ref(0.7, 0.2)).epsilon(1e-12));
}

TEST_CASE("rotation-invariance determinant") {
  CHECK(std::abs(parametrix::det_id_minus_T(0.0, 1.7, 0) - std::pow(0.7, 4)) < 1e-9);
  auto rep = parametrix::second_derivative_check();
  CHECK(rep.max_abs_second_derivative <= 1e-7);
  CHECK(rep.f_lambda_u0_error <= 1e-10);
  CHECK(rep.max_invariance_defect <= 1e-8);
}

TEST_CASE("gaussian quadrature oracles") {
  using namespace quadrature;
  LogGaussIntegrand g1;
  g1.dim = 1;
  g1.a = 1.0;
  CHECK(std::abs(integrate(g1, 1e-12).value - std::sqrt(kPi)) < 1e-10);

  LogGaussIntegrand g1m = g1;
  g1m.poly = MultiPoly::monomial(1, {2});
  CHECK(std::abs(integrate_signed(g1m, 1e-10).value - std::sqrt(kPi) / 2.0) < 1e-9);

  LogGaussIntegrand godd = g1;
  godd.poly = MultiPoly::monomial(1, {1});
  CHECK(std::abs(integrate_signed(godd, 1e-10).value) < 1e-9);

  const double A1 = -(std::sqrt(kPi) / 2.0) * (kGamma + 2.0 * std::log(2.0));
  LogGaussIntegrand glog = g1;
  glog.log_factors.push_back({MultiPoly::monomial(1, {1}), 1, 1});
  CHECK(std::abs(integrate_signed(glog, 1e-9).value - A1) < 1e-7);

  const double A2 =
      (std::sqrt(kPi) / 4.0) *
      (std::pow(kGamma + 2.0 * std::log(2.0), 2) + kPi * kPi / 2.0);
  LogGaussIntegrand glog2 = g1;
  glog2.log_factors.push_back({MultiPoly::monomial(1, {1}), 1, 2});
  CHECK(std::abs(integrate_signed(glog2, 1e-9).value - A2) < 1e-6);

  LogGaussIntegrand g2;
  g2.dim = 2;
  g2.a = 1.0;
  MultiPoly yz;
  yz.dim = 2;
  yz.terms = {{{2, 0}, 1.0}, {{0, 2}, 1.0}};
  g2.log_factors.push_back({yz, 2, 1});
  CHECK(std::abs(integrate_signed(g2, 1e-9).value + kPi * kGamma) < 1e-6);
}

TEST_CASE("monte carlo oracle and box sampler") {
  using namespace quadrature;
  LogGaussIntegrand g2;
  g2.dim = 2;
  g2.a = 1.0;
  MultiPoly yz;
  yz.dim = 2;
  yz.terms = {{{2, 0}, 1.0}, {{0, 2}, 1.0}};
  g2.log_factors.push_back({yz, 2, 1});
  auto mc = mc_oracle(g2, 42, 2000000);
  auto det = integrate_signed(g2, 1e-9);
  CHECK(std::abs(mc.estimate - det.value) < 4.0 * mc.stderr_est);
  auto mc2 = mc_oracle(g2, 42, 2000000);
  CHECK(mc.estimate == mc2.estimate);  // deterministic in seed

  auto box = mc_box(
      2, [](const std::vector<double>& x) { return x[0] + x[1]; }, {0.0, 0.0}, {1.0, 1.0}, 9,
      1000000);
  CHECK(std::abs(box.estimate - 1.0) < 5.0 * box.stderr_est + 1e-3);
}

TEST_CASE("finiteness guard and adaptive engine") {
  using namespace quadrature;
  LogGaussIntegrand bad;
  bad.dim = 2;
  bad.a = 1.0;
  MultiPoly p;
  p.dim = 2;
  p.terms = {{{2, 0}, 1.0}, {{0, 1}, 1.0}};  // x^2 + y: not homogeneous
  bad.log_factors.push_back({p, 2, 1});
  CHECK(!finiteness_guard(bad));

  auto res = integrate_adaptive(
      2, [](const std::vector<double>& x) { return std::exp(-x[0] * x[0] - x[1] * x[1]); },
      {-6.0, -6.0}, {6.0, 6.0});
  CHECK(std::abs(res.value - kPi) < 1e-8);
}
