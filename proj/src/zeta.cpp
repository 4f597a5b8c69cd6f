#include "torsionlab/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "torsionlab/quadrature.hpp"

namespace torsionlab::zeta {

namespace {

constexpr double kPi = 3.14159265358979323846;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

cplx log_gamma(cplx z) {
  static const double c[9] = {0.99999999999980993,      676.5203681218851,
                              -1259.1392167224028,      771.32342877765313,
                              -176.61502916214059,      12.507343278686905,
                              -0.13857109526572012,     9.9843695780195716e-6,
                              1.5056327351493116e-7};
  if (z.real() < 0.5)
    return std::log(kPi / std::sin(kPi * z)) - log_gamma(1.0 - z);
  z -= 1.0;
  cplx x = c[0];
  for (int i = 1; i < 9; ++i) x += c[i] / (z + static_cast<double>(i));
  cplx t = z + 7.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

cplx gamma(cplx z) { return std::exp(log_gamma(z)); }

MellinZeta MellinZeta::build(std::vector<MellinTerm> terms,
                             std::vector<std::pair<double, double>> tail_samples) {
  MellinZeta z;
  z.terms = std::move(terms);
  z.tail = std::move(tail_samples);
  const int n = static_cast<int>(z.tail.size());
  if (n < 8) throw std::invalid_argument("MellinZeta: need at least 8 tail samples");
  for (int i = 1; i < n; ++i)
    if (!(z.tail[i].first > z.tail[i - 1].first))
      throw std::invalid_argument("MellinZeta: tail samples must be strictly increasing in t");
  // slope estimates for the Hermite interpolant: differentiate the Lagrange
  // interpolant through the five nearest samples (fourth-order accurate)
  z.tail_slope.resize(n);
  const int win = std::min(5, n);
  for (int i = 0; i < n; ++i) {
    int lo = std::clamp(i - win / 2, 0, n - win);
    double xi = z.tail[i].first;
    double slope_i = 0.0;
    for (int j = lo; j < lo + win; ++j) {
      // derivative of the j-th Lagrange basis at xi
      double dLj = 0.0;
      for (int k = lo; k < lo + win; ++k) {
        if (k == j) continue;
        double prod = 1.0 / (z.tail[j].first - z.tail[k].first);
        for (int m2 = lo; m2 < lo + win; ++m2) {
          if (m2 == j || m2 == k) continue;
          prod *= (xi - z.tail[m2].first) / (z.tail[j].first - z.tail[m2].first);
        }
        dLj += prod;
      }
      slope_i += z.tail[j].second * dLj;
    }
    z.tail_slope[i] = slope_i;
  }
  // exponential continuation fitted on the decaying part of the tail
  std::vector<std::pair<double, double>> pts;
  for (int i = n / 2; i < n; ++i)
    if (std::abs(z.tail[i].second) > 1e-280)
      pts.push_back({z.tail[i].first, std::log(std::abs(z.tail[i].second))});
  if (pts.size() < 2) {
    z.tail_rate = 1.0;
    z.tail_coef = 0.0;
    return z;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double m = static_cast<double>(pts.size());
  double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  double icept = (sy - slope * sx) / m;
  if (!(slope < 0)) throw std::runtime_error("MellinZeta: tail samples do not decay");
  z.tail_rate = -slope;
  z.tail_coef = (z.tail.back().second < 0 ? -1.0 : 1.0) * std::exp(icept);
  return z;
}

cplx MellinZeta::mellin_numerator(cplx s) const {
  cplx total = 0.0;
  for (const auto& term : terms) {
    double sign = term.log_power % 2 ? -1.0 : 1.0;
    total += term.coefficient * sign * factorial(term.log_power) /
             std::pow(s + term.exponent, term.log_power + 1);
  }
  static std::vector<double> gx, gw;
  if (gx.empty()) quadrature::gauss_legendre(4, gx, gw);
  const int n = static_cast<int>(tail.size());
  for (int i = 0; i + 1 < n; ++i) {
    auto [t0, y0] = tail[i];
    auto [t1, y1] = tail[i + 1];
    double dt = t1 - t0, d0 = tail_slope[i], d1 = tail_slope[i + 1];
    cplx acc = 0.0;
    for (std::size_t q = 0; q < gx.size(); ++q) {
      double u = 0.5 * (gx[q] + 1.0);
      double u2 = u * u, u3 = u2 * u;
      double th = y0 * (2 * u3 - 3 * u2 + 1) + d0 * dt * (u3 - 2 * u2 + u) +
                  y1 * (-2 * u3 + 3 * u2) + d1 * dt * (u3 - u2);
      double t = t0 + u * dt;
      acc += 0.5 * gw[q] * th * std::exp((s - 1.0) * std::log(t));
    }
    total += acc * dt;
  }
  if (tail_coef != 0.0) {
    // int_T^inf t^{s-1} c e^{-mu t} dt by composite Gauss panels
    static std::vector<double> px, pw;
    if (px.empty()) quadrature::gauss_legendre(8, px, pw);
    double T = tail.back().first;
    double span = 60.0 / tail_rate;
    const int panels = 30;
    cplx acc = 0.0;
    for (int p = 0; p < panels; ++p) {
      double a = T + span * p / panels, b = T + span * (p + 1) / panels;
      for (std::size_t q = 0; q < px.size(); ++q) {
        double t = 0.5 * (a + b) + 0.5 * (b - a) * px[q];
        acc += 0.5 * (b - a) * pw[q] * tail_coef * std::exp(-tail_rate * t) *
               std::exp((s - 1.0) * std::log(t));
      }
    }
    total += acc;
  }
  return total;
}

cplx MellinZeta::operator()(cplx s) const { return mellin_numerator(s) / gamma(s); }

cplx Laurent::coefficient(int order) const {
  int idx = order - lowest;
  if (idx < 0 || idx >= static_cast<int>(coeffs.size())) return 0.0;
  return coeffs[idx];
}

Laurent laurent_series(const std::function<cplx(cplx)>& f, double s0, int lowest, int highest,
                       double radius, int n_points) {
  std::vector<cplx> vals(n_points);
  for (int j = 0; j < n_points; ++j) {
    double phi = 2.0 * kPi * j / n_points;
    vals[j] = f(cplx(s0 + radius * std::cos(phi), radius * std::sin(phi)));
  }
  Laurent L;
  L.s0 = s0;
  L.lowest = lowest;
  for (int k = lowest; k <= highest; ++k) {
    cplx a = 0.0;
    for (int j = 0; j < n_points; ++j) {
      double phi = 2.0 * kPi * j / n_points;
      a += vals[j] * std::exp(cplx(0.0, -k * phi));
    }
    L.coeffs.push_back(a / (static_cast<double>(n_points) * std::pow(radius, k)));
  }
  return L;
}

double finite_part_zeta_over_s(const MellinZeta& z) {
  auto L = laurent_series([&z](cplx s) { return z(s); }, 0.0, -4, 2);
  return L.coefficient(1).real();
}

TorsionResult finite_part_and_torsion(const std::vector<MellinZeta>& zeta_by_p) {
  TorsionResult out;
  for (std::size_t i = 0; i < zeta_by_p.size(); ++i) {
    int p = static_cast<int>(i) + 1;
    double sign = p % 2 ? -1.0 : 1.0;
    out.via_finite_parts += 0.5 * sign * p * finite_part_zeta_over_s(zeta_by_p[i]);
  }
  auto combo = [&zeta_by_p](cplx s) {
    cplx v = 0.0;
    for (std::size_t i = 0; i < zeta_by_p.size(); ++i) {
      int p = static_cast<int>(i) + 1;
      double sign = p % 2 ? -1.0 : 1.0;
      v += sign * static_cast<double>(p) * zeta_by_p[i](s);
    }
    return v;
  };
  auto L = laurent_series(combo, 0.0, -4, 2);
  out.via_derivative = 0.5 * L.coefficient(1).real();
  for (int k = -4; k < 0; ++k)
    out.max_pole_coefficient = std::max(out.max_pole_coefficient, std::abs(L.coefficient(k)));
  return out;
}

}  // namespace torsionlab::zeta
