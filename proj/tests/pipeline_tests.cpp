#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "torsionlab/asymptotics.hpp"
#include "torsionlab/zeta.hpp"

using namespace torsionlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

double factorial_d(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::vector<std::pair<double, double>> tail_of(const std::function<double(double)>& f,
                                               double T = 40.0, double h = 0.01) {
  std::vector<std::pair<double, double>> v;
  for (double t = 1.0; t <= T + 1e-12; t += h) v.push_back({t, f(t)});
  return v;
}

std::vector<zeta::MellinTerm> exp_series_terms(double rate, int log_power, double scale) {
  std::vector<zeta::MellinTerm> terms;
  for (int j = 0; j <= 25; ++j)
    terms.push_back({static_cast<double>(j), log_power,
                     scale * (j % 2 ? -1.0 : 1.0) * std::pow(rate, j) / factorial_d(j)});
  return terms;
}

}  // namespace

TEST_CASE("expansion fit round-trips exact data") {
  asymptotics::TraceSamples samples;
  for (int j = 0; j < 40; ++j) {
    double t = 1e-4 * std::pow(1e3, j / 39.0);
    double y = std::pow(t, -1.5) * (3.0 + 0.5 * std::sqrt(t) + 2.0 * std::log(t));
    samples.push_back({t, y});
  }
  auto fit = asymptotics::fit_expansion(samples, 5, 2, 2, 1);
  for (const auto& term : fit.terms) {
    double expect = 0.0;
    if (std::abs(term.exponent + 1.5) < 1e-9 && term.log_power == 0) expect = 3.0;
    if (std::abs(term.exponent + 1.5) < 1e-9 && term.log_power == 1) expect = 2.0;
    if (std::abs(term.exponent + 1.0) < 1e-9 && term.log_power == 0) expect = 0.5;
    CHECK(std::abs(term.coefficient - expect) < 1e-8);
  }
  CHECK(fit.residual < 1e-10);
  CHECK(asymptotics::log_degree(fit) == 1);
  CHECK(std::abs(asymptotics::leading_exponent(samples, 1) + 1.5) < 0.02);
  for (const auto& [t, y] : samples)
    CHECK(asymptotics::synthesize(fit, t) == doctest::Approx(y).epsilon(1e-8));
}

TEST_CASE("expansion fit rejects degenerate input") {
  asymptotics::TraceSamples tiny = {{0.1, 1.0}, {0.2, 2.0}};
  CHECK_THROWS(asymptotics::fit_expansion(tiny, 5, 2, 3, 1));
  asymptotics::TraceSamples neg = {{-1.0, 1.0}};
  CHECK_THROWS(asymptotics::fit_expansion(neg, 5, 2, 0, 0));
}

TEST_CASE("log-square detection") {
  asymptotics::TraceSamples samples;
  for (int j = 0; j < 30; ++j) {
    double t = 1e-4 * std::pow(1e3, j / 29.0);
    double l = std::log(t);
    samples.push_back({t, (1.0 + 0.4 * l + 0.9 * l * l) / t});
  }
  auto fit = asymptotics::fit_expansion(samples, 5, 3, 2, 2);
  CHECK(asymptotics::log_degree(fit) == 2);
}

TEST_CASE("second-derivative assembly arithmetic") {
  std::array<double, 3> d2{0.5, -0.25, 0.125};
  double pi32 = std::pow(kPi, 1.5);
  double expect = 2.0 * 1.7 + 3.0 * pi32 + (0.5 - 0.25 + 0.125) * pi32 / 2.0;
  CHECK(asymptotics::c2_assembly(2.0, 3.0, d2, 1.7) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("a0 hessian directions agree by symmetry") {
  auto d2 = asymptotics::a0_second_derivatives(parametrix::KRep::trivial(3));
  for (double v : d2) CHECK(std::isfinite(v));
  CHECK(d2[0] == doctest::Approx(d2[2]).epsilon(1e-6));
  CHECK(d2[0] == doctest::Approx(d2[1]).epsilon(1e-6));
}

TEST_CASE("gamma function oracles") {
  CHECK(std::abs(zeta::gamma(0.5) - std::sqrt(kPi)) < 1e-12);
  CHECK(std::abs(zeta::gamma(5.0) - 24.0) < 1e-10);
  CHECK(std::abs(zeta::gamma(-0.5) + 2.0 * std::sqrt(kPi)) < 1e-10);
  zeta::cplx z(0.3, 0.2);
  zeta::cplx refl = zeta::gamma(z) * zeta::gamma(1.0 - z);
  zeta::cplx expect = kPi / std::sin(kPi * z);
  CHECK(std::abs(refl - expect) < 1e-10 * std::abs(expect));
}

TEST_CASE("mellin zeta reproduces gamma ratios") {
  auto za = zeta::MellinZeta::build(exp_series_terms(1.0, 0, 1.0),
                                    tail_of([](double t) { return std::exp(-t); }));
  for (double s : {0.7, 1.3, 2.4}) {
    CHECK(std::abs(za(s) - 1.0) < 1e-8);
    CHECK(std::abs(za.mellin_numerator(s) - zeta::gamma(s)) < 1e-8 * std::abs(zeta::gamma(s)));
  }
  CHECK_THROWS(zeta::MellinZeta::build(exp_series_terms(1.0, 0, 1.0),
                                       tail_of([](double t) { return std::exp(t / 50.0); })));
}

TEST_CASE("laurent coefficients of an entire function") {
  auto L = zeta::laurent_series([](zeta::cplx s) { return std::exp(s); }, 0.0, -2, 4);
  CHECK(std::abs(L.coefficient(-1)) < 1e-12);
  CHECK(std::abs(L.coefficient(-2)) < 1e-12);
  for (int k = 0; k <= 4; ++k)
    CHECK(std::abs(L.coefficient(k) - 1.0 / factorial_d(k)) < 1e-10);
}

TEST_CASE("pole structure matches log powers") {
  // theta = t^{-1/2} log t e^{-t}: double pole of Gamma(s) zeta(s) at s = 1/2
  std::vector<zeta::MellinTerm> terms;
  for (int j = 0; j <= 25; ++j)
    terms.push_back({j - 0.5, 1, (j % 2 ? -1.0 : 1.0) / factorial_d(j)});
  auto z = zeta::MellinZeta::build(
      terms, tail_of([](double t) { return std::log(t) * std::exp(-t) / std::sqrt(t); }));
  auto L = zeta::laurent_series([&z](zeta::cplx s) { return z(s); }, 0.5, -3, 0, 0.05);
  CHECK(std::abs(L.coefficient(-2) + 1.0 / std::sqrt(kPi)) < 1e-6);
  CHECK(std::abs(L.coefficient(-3)) < 1e-8);  // pole order <= log power + 1
}

TEST_CASE("all-zero traces give zero torsion") {
  std::vector<std::pair<double, double>> zero_tail;
  for (double t = 1.0; t <= 41.0; t += 0.5) zero_tail.push_back({t, 0.0});
  auto z0 = zeta::MellinZeta::build({}, zero_tail);
  auto res = zeta::finite_part_and_torsion({z0, z0, z0});
  CHECK(res.via_finite_parts == doctest::Approx(0.0));
  CHECK(res.via_derivative == doctest::Approx(0.0));
  CHECK(res.max_pole_coefficient == doctest::Approx(0.0));
}

TEST_CASE("finite part equals derivative when poles cancel") {
  auto z1 = zeta::MellinZeta::build(
      exp_series_terms(1.0, 1, 1.0),
      tail_of([](double t) { return std::log(t) * std::exp(-t); }));
  std::vector<zeta::MellinTerm> t2 = exp_series_terms(1.0, 1, 0.5);
  for (const auto& term : exp_series_terms(2.0, 0, 1.0)) t2.push_back(term);
  auto z2 = zeta::MellinZeta::build(t2, tail_of([](double t) {
                                      return 0.5 * std::log(t) * std::exp(-t) +
                                             std::exp(-2.0 * t);
                                    }));
  auto res = zeta::finite_part_and_torsion({z1, z2});
  CHECK(std::abs(res.via_finite_parts - res.via_derivative) < 1e-8);
  CHECK(res.max_pole_coefficient < 1e-6);

  // without the compensating factor the combination keeps its pole
  auto bad = zeta::finite_part_and_torsion({z1});
  CHECK(bad.max_pole_coefficient > 0.1);
}

TEST_CASE("mellin split reassembles the direct integral") {
  auto za = zeta::MellinZeta::build(exp_series_terms(1.0, 0, 1.0),
                                    tail_of([](double t) { return std::exp(-t); }));
  // direct trapezoid Mellin integral over (0, 40] at s = 3
  double s = 3.0, direct = 0.0, h = 1e-4;
  for (double t = h; t <= 40.0; t += h)
    direct += std::pow(t - h / 2.0, s - 1.0) * std::exp(-(t - h / 2.0)) * h;
  CHECK(std::abs(za.mellin_numerator(s).real() - direct) < 1e-5);
}
