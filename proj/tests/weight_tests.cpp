#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <random>

#include "torsionlab/orbital.hpp"
#include "torsionlab/quadrature.hpp"
#include "torsionlab/weights.hpp"

using namespace torsionlab;
using geometry::Matrix;
using geometry::Vector;

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

Matrix block_diag_a(const roots::LeviComposition& M, const std::vector<double>& a) {
  int n = M.rank();
  Matrix A = Matrix::Zero(n, n);
  for (int b = 0; b < M.num_blocks(); ++b)
    for (int i = 0; i < M.blocks[b]; ++i) A(M.block_start(b) + i, M.block_start(b) + i) = a[b];
  return A;
}

}  // namespace

TEST_CASE("conjugator equation solved exactly") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (auto blocks : {std::vector<int>{1, 1}, std::vector<int>{2, 1}, std::vector<int>{1, 1, 1}}) {
    roots::LeviComposition M{blocks, roots::GroupKind::GL};
    auto P1 = standard_p(blocks);
    int q = static_cast<int>(geometry::nilpotent_positions(P1).size());
    for (const char* label : {"trivial", "regular"}) {
      for (int trial = 0; trial < 10; ++trial) {
        Vector z(q);
        for (int i = 0; i < q; ++i) z[i] = U(rng) + (U(rng) > 0 ? 0.3 : -0.3);
        auto pi = weights::make_pi(M, label, z);
        std::vector<double> a(M.num_blocks());
        for (int b = 0; b < M.num_blocks(); ++b) a[b] = 1.0 + 0.4 * (b + 1) + 0.1 * U(rng);
        if (trial == 0) a[0] = a.back() * (1.0 + 1e-6);  // nearly singular direction
        Matrix n = weights::solve_conjugator(a, pi);
        Matrix A = block_diag_a(M, a);
        Matrix u = Matrix::Identity(M.rank(), M.rank()) + pi.datum.X0;
        Matrix pimat = u + pi.Z;
        double resid = (A * u * n - n * A * pimat).norm() / (1.0 + n.norm() * A.norm());
        CHECK(resid < 1e-8);
      }
    }
  }
}

TEST_CASE("zero Z gives identity conjugator") {
  roots::LeviComposition M{{2, 1}, roots::GroupKind::GL};
  auto pi = weights::make_pi(M, "regular", Vector::Zero(2));
  Matrix n = weights::solve_conjugator({1.7, 0.6}, pi);
  CHECK((n - Matrix::Identity(3, 3)).norm() < 1e-12);
}

TEST_CASE("v_P dual evaluation paths agree") {
  auto P = standard_p({1, 1});
  for (double x : {0.3, -1.2, 4.0}) {
    Matrix nbar = Matrix::Identity(2, 2);
    nbar(1, 0) = x;
    auto v = weights::v_P_norm(0, nbar, P);
    CHECK(v.via_H == doctest::Approx(std::sqrt(1.0 + x * x)).epsilon(1e-10));
    CHECK(v.via_minors == doctest::Approx(v.via_H).epsilon(1e-10));
  }
  auto P3 = standard_p({1, 1, 1});
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix nbar = Matrix::Identity(3, 3);
    nbar(1, 0) = U(rng);
    nbar(2, 0) = U(rng);
    nbar(2, 1) = U(rng);
    for (int w = 0; w < 2; ++w) {
      auto v = weights::v_P_norm(w, nbar, P3);
      CHECK(v.via_minors == doctest::Approx(v.via_H).epsilon(1e-9));
    }
  }
}

TEST_CASE("kappa0 estimation is stable") {
  roots::LeviComposition M{{1, 1}, roots::GroupKind::GL};
  weights::UnipotentDatum datum{M, Matrix::Zero(2, 2)};
  auto first = weights::estimate_kappa0(datum, 0, 1, 7);
  CHECK(first.kappa0 >= 1);
  CHECK(first.rho > 0.0);
  CHECK(first.slope_residual < 0.1);
  for (std::uint64_t seed = 8; seed < 18; ++seed) {
    auto r = weights::estimate_kappa0(datum, 0, 1, seed);
    CHECK(r.kappa0 == first.kappa0);
  }

  roots::LeviComposition M21{{2, 1}, roots::GroupKind::GL};
  weights::UnipotentDatum reg{M21, weights::nilpotent_representative(M21, "regular")};
  auto table = weights::rho_table(reg, 7);
  CHECK(table.size() == 1);
  for (const auto& [pair, rho] : table) CHECK(rho > 0.0);
}

TEST_CASE("w_P limit is affine in log s") {
  std::mt19937_64 rng(35);
  for (auto blocks : {std::vector<int>{1, 1}, std::vector<int>{2, 1}}) {
    roots::LeviComposition M{blocks, roots::GroupKind::GL};
    auto P1 = standard_p(blocks);
    int q = static_cast<int>(geometry::nilpotent_positions(P1).size());
    Vector z(q);
    for (int i = 0; i < q; ++i) z[i] = 0.8 - 0.25 * i;
    auto pi = weights::make_pi(M, "trivial", z);
    auto rho = weights::rho_table(pi.datum, 7);
    for (const auto& P : roots::parabolics_containing(M)) {
      std::vector<double> ls = {-0.7, 0.0, 0.7, 1.4};
      std::vector<double> vals;
      for (double l : ls) {
        auto wp = weights::w_P_log_limit(weights::scale_pi(pi, std::exp(l)), P, 0, rho);
        CHECK(wp.residual < 1e-6);
        vals.push_back(wp.log_value);
      }
      // second difference of an affine sequence vanishes
      for (std::size_t i = 0; i + 2 < vals.size(); ++i)
        CHECK(std::abs(vals[i] - 2.0 * vals[i + 1] + vals[i + 2]) < 1e-5);
    }
  }
}

TEST_CASE("w_M diagnostics and translation structure") {
  roots::LeviComposition M{{1, 1}, roots::GroupKind::GL};
  Vector z1(1), z2(1);
  z1 << 0.9;
  z2 << -1.7;
  auto ev1 = weights::w_M(weights::make_pi(M, "trivial", z1));
  CHECK(ev1.lambda_spread < 1e-4);
  CHECK(ev1.max_extrapolation_residual < 1e-5);
  // w(sx) - w(x) depends only on s (log-structure of the weight)
  double d1 = weights::w_M(weights::scale_pi(weights::make_pi(M, "trivial", z1), kPi)).value -
              ev1.value;
  double d2 = weights::w_M(weights::scale_pi(weights::make_pi(M, "trivial", z2), kPi)).value -
              weights::w_M(weights::make_pi(M, "trivial", z2)).value;
  CHECK(d1 == doctest::Approx(d2).epsilon(1e-5));

  // grouped sum over F(M): two-block case has the singleton partition plus G
  double wc = weights::w_M_class(weights::make_pi(M, "trivial", z1));
  CHECK(wc == doctest::Approx(2.0 + ev1.value).epsilon(1e-9));
}

TEST_CASE("weight invariance under sign conjugation") {
  roots::LeviComposition M{{2, 1}, roots::GroupKind::GL};
  Vector z(2);
  z << 1.1, -0.6;
  auto pi = weights::make_pi(M, "trivial", z);
  Matrix k = Matrix::Identity(3, 3);
  k(0, 0) = -1.0;
  k(1, 1) = -1.0;
  auto a = weights::w_M(pi).value;
  auto b = weights::w_M(weights::conjugate_pi(pi, k)).value;
  CHECK(a == doctest::Approx(b).epsilon(1e-6));
}

TEST_CASE("explicit orbital integrals against closed forms") {
  const double rpi = std::sqrt(kPi);
  const double A1 = -(rpi / 2.0) * (kGamma + 2.0 * std::log(2.0));
  const double A2 = (rpi / 4.0) * (std::pow(kGamma + 2.0 * std::log(2.0), 2) + kPi * kPi / 2.0);

  orbital::ExplicitEntry gl2{orbital::Group::GL2, {1, 1}, "trivial"};
  auto f = orbital::Kernel::gaussian(1.0);
  CHECK(orbital::j_explicit(gl2, f).value == doctest::Approx(A1).epsilon(1e-6));

  orbital::ExplicitEntry m1{orbital::Group::GL3, {2, 1}, "trivial"};
  CHECK(orbital::j_explicit(m1, f).value == doctest::Approx(-kPi * kGamma).epsilon(1e-6));

  orbital::ExplicitEntry m0{orbital::Group::GL3, {1, 1, 1}, "trivial"};
  double sep = A1 * A1 * rpi + 2.0 * A2 * rpi * rpi;
  CHECK(orbital::j_explicit(m0, f).value == doctest::Approx(sep).epsilon(1e-5));
}

TEST_CASE("invariant orbital integrals") {
  auto f = orbital::Kernel::gaussian(1.0);
  CHECK(orbital::j_invariant(orbital::Group::GL3, "trivial", f).value == doctest::Approx(1.0));
  double reg = orbital::j_invariant(orbital::Group::GL3, "regular", f, 1e-7).value;
  CHECK(reg == doctest::Approx(std::pow(kPi, 1.5)).epsilon(1e-5));
  double sub = orbital::j_invariant(orbital::Group::GL3, "subregular", f, 1e-7).value;
  CHECK(sub == doctest::Approx(kPi).epsilon(1e-5));
}

TEST_CASE("finite order classes") {
  CHECK(orbital::alpha_elliptic(2) == std::sqrt(2.0));
  CHECK(orbital::alpha_elliptic(3) == doctest::Approx(std::sqrt(2.0) * std::sin(kPi / 3.0)));
  for (int i : {2, 3})
    for (int sign : {+1, -1}) {
      Matrix c = orbital::elliptic_conjugate_gl2(i, sign, 0.4);
      CHECK(std::abs(c.determinant() - 1.0) < 1e-12);
      double r2 = orbital::elliptic_r2(i, sign, 0.05);
      double a = orbital::alpha_elliptic(i);
      CHECK(r2 / (0.05 * 0.05) == doctest::Approx(8.0 * a * a).epsilon(0.02));
    }

  auto fr = orbital::Kernel::radial(parametrix::SurrogateKernel::gaussian(2), 0.5);
  double j2 = orbital::j_finite_order_gl2("sigma2+", fr).value;
  CHECK(std::isfinite(j2));
  CHECK(j2 > 0.0);
  auto mc = quadrature::mc_box(
      1,
      [&](const std::vector<double>& x) {
        Matrix g = orbital::elliptic_conjugate_gl2(2, +1, x[0]);
        return fr({}, g) * std::sinh(2.0 * x[0]);
      },
      {0.0}, {12.0}, 17, 2000000);
  CHECK(std::abs(j2 - mc.estimate) < 4.0 * mc.stderr_est + 1e-4);

  auto fg = orbital::Kernel::gaussian(1.0);
  double s1 = orbital::j_finite_order_gl2("sigma1", fg).value;
  // (a1 log(1+x^2) + a2) e^{-x^2}: a2 part integrates to sqrt(pi)
  orbital::FiniteOrderConfig cfg;
  cfg.a1 = 0.0;
  double s1_const = orbital::j_finite_order_gl2("sigma1", fg, cfg).value;
  CHECK(s1_const == doctest::Approx(std::sqrt(kPi)).epsilon(1e-6));
  CHECK(s1 > s1_const);  // log(1+x^2) >= 0
}

TEST_CASE("gl3 finite order smoke and structure") {
  auto fr = orbital::Kernel::radial(parametrix::SurrogateKernel::gaussian(5), 0.7);
  orbital::FiniteOrderConfig cfg;
  cfg.tol = 1e-4;
  double jg = orbital::j_finite_order_gl3("sigma2", +1, +1, "JG", fr, cfg).value;
  double jm = orbital::j_finite_order_gl3("sigma2", +1, +1, "JM", fr, cfg).value;
  CHECK(std::isfinite(jg));
  CHECK(std::isfinite(jm));
  CHECK(jg > 0.0);
  CHECK(jm >= 0.0);  // weight log(1+||w||^2) >= 0

  auto fg = orbital::Kernel::gaussian(1.0);
  for (const char* op : {"JG_U", "JG_u1", "JM0", "JM_U", "JM_u1"}) {
    double v = orbital::j_finite_order_gl3("sigma1", +1, 0, op, fg, cfg).value;
    CHECK(std::isfinite(v));
  }
}

TEST_CASE("generic weighted integral runs and scales") {
  roots::LeviComposition M{{1, 1}, roots::GroupKind::GL};
  auto fg = orbital::Kernel::gaussian(1.0);
  auto res = orbital::j_generic(M, "trivial", fg, 1e-2);
  CHECK(std::isfinite(res.value));
  CHECK(res.diagnostics.regions_used > 0);
}
