#include "torsionlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace torsionlab::weights {

namespace {

using Positions = std::vector<std::pair<int, int>>;

Vector coordinate_values(const roots::LeviComposition& M, const std::vector<double>& a_block) {
  if (static_cast<int>(a_block.size()) != M.num_blocks())
    throw std::invalid_argument("coordinate_values: block count mismatch");
  Vector a(M.rank());
  for (int b = 0; b < M.num_blocks(); ++b)
    for (int i = 0; i < M.blocks[b]; ++i) a[M.block_start(b) + i] = a_block[b];
  return a;
}

// Unique Y supported on `pos` with (Id+Y)(a pi) = (a u)(Id+Y); the equation
// Y (a pi) - (a u) Y = a u - a pi is exactly linear because the quadratic
// terms leave the span of `pos`.
Matrix solve_positions(const Vector& a, const Matrix& u, const Matrix& pi,
                       const Positions& pos) {
  const int n = static_cast<int>(u.rows());
  const int N = static_cast<int>(pos.size());
  Matrix api = a.asDiagonal() * pi, au = a.asDiagonal() * u;
  Matrix A = Matrix::Zero(N, N);
  Vector b(N);
  for (int row = 0; row < N; ++row) {
    auto [i, j] = pos[row];
    for (int col = 0; col < N; ++col) {
      auto [r, s] = pos[col];
      if (r == i) A(row, col) += api(s, j);
      if (s == j) A(row, col) -= au(i, r);
    }
    b[row] = au(i, j) - api(i, j);
  }
  Eigen::FullPivLU<Matrix> lu(A);
  if (!lu.isInvertible()) throw std::domain_error("conjugator system is singular");
  Vector y = lu.solve(b);
  Matrix Y = Matrix::Zero(n, n);
  for (int row = 0; row < N; ++row) Y(pos[row].first, pos[row].second) = y[row];
  Matrix nmat = Matrix::Identity(n, n) + Y;
  double resid = (nmat * api - au * nmat).norm() / (1.0 + api.norm() + au.norm());
  if (resid > 1e-8) throw std::domain_error("conjugator equation not satisfied");
  return nmat;
}

// sum over m-subsets J of det^2 of rows J, columns I of ninv
double minor_norm(const Matrix& ninv, const std::vector<int>& I) {
  const int n = static_cast<int>(ninv.rows());
  const int m = static_cast<int>(I.size());
  double s2 = 0.0;
  std::vector<int> J(m);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != m) continue;
    int t = 0;
    for (int r = 0; r < n; ++r)
      if (mask & (1u << r)) J[t++] = r;
    Matrix sub(m, m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) sub(r, c) = ninv(J[r], I[c]);
    double d = sub.determinant();
    s2 += d * d;
  }
  return std::sqrt(s2);
}

// coordinates of the first (weight_index+1) blocks in P's order
std::vector<int> leading_coords(const roots::ParabolicDatum& P, int weight_index) {
  std::vector<int> I;
  for (int pos = 0; pos <= weight_index; ++pos) {
    int b = P.block_order[pos];
    for (int i = 0; i < P.levi.blocks[b]; ++i) I.push_back(P.levi.block_start(b) + i);
  }
  std::sort(I.begin(), I.end());
  return I;
}

Matrix submatrix(const Matrix& A, const std::vector<int>& coords) {
  const int m = static_cast<int>(coords.size());
  Matrix S(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) S(r, c) = A(coords[r], coords[c]);
  return S;
}

double neville_to_zero(const std::vector<double>& xs, const std::vector<double>& ys,
                       double* last_correction) {
  auto eval = [&](int n) {
    std::vector<double> t(ys.begin(), ys.begin() + n);
    for (int level = 1; level < n; ++level)
      for (int i = 0; i < n - level; ++i)
        t[i] = (xs[i + level] * t[i] - xs[i] * t[i + 1]) / (xs[i + level] - xs[i]);
    return t[0];
  };
  const int n = static_cast<int>(xs.size());
  double full = eval(n);
  if (last_correction) *last_correction = std::abs(full - eval(n - 1));
  return full;
}

}  // namespace

Matrix nilpotent_representative(const roots::LeviComposition& M, const std::string& label) {
  const int n = M.rank();
  Matrix X0 = Matrix::Zero(n, n);
  if (label == "trivial") return X0;
  if (label == "regular") {
    for (int b = 0; b < M.num_blocks(); ++b) {
      int s = M.block_start(b);
      for (int i = 0; i + 1 < M.blocks[b]; ++i) X0(s + i, s + i + 1) = 1.0;
    }
    return X0;
  }
  throw std::invalid_argument("unknown class label: " + label);
}

PiElement make_pi(const roots::LeviComposition& M, const std::string& label,
                  const Vector& z_coords) {
  roots::ParabolicDatum P1{M, {}};
  for (int b = 0; b < M.num_blocks(); ++b) P1.block_order.push_back(b);
  const int n = M.rank();
  Matrix Z = geometry::nilpotent_matrix(P1, z_coords) - Matrix::Identity(n, n);
  return {{M, nilpotent_representative(M, label)}, Z};
}

PiElement scale_pi(const PiElement& pi, double s) {
  return {{pi.datum.M, s * pi.datum.X0}, s * pi.Z};
}

PiElement conjugate_pi(const PiElement& pi, const Matrix& k) {
  Matrix kinv = k.inverse();
  return {{pi.datum.M, kinv * pi.datum.X0 * k}, kinv * pi.Z * k};
}

Matrix solve_conjugator(const std::vector<double>& a_block_values, const PiElement& pi) {
  const auto& M = pi.datum.M;
  roots::ParabolicDatum P1{M, {}};
  for (int b = 0; b < M.num_blocks(); ++b) P1.block_order.push_back(b);
  Vector a = coordinate_values(M, a_block_values);
  const int n = M.rank();
  Matrix u = Matrix::Identity(n, n) + pi.datum.X0;
  Matrix pimat = u + pi.Z;
  return solve_positions(a, u, pimat, geometry::nilpotent_positions(P1));
}

VPResult v_P_norm(int weight_index, const Matrix& n, const roots::ParabolicDatum& P) {
  if (weight_index < 0 || weight_index >= P.levi.num_blocks() - 1)
    throw std::invalid_argument("v_P_norm: weight index out of range");
  VPResult res;
  res.via_minors = minor_norm(n.inverse(), leading_coords(P, weight_index));
  auto iw = geometry::iwasawa(n, P);
  auto rdat = roots::simple_roots_coroots(P);
  double pairing = 0.0;
  for (int i = 0; i < P.levi.rank(); ++i)
    pairing += to_double(rdat.dual_weights[weight_index][i]) * iw.H0[i];
  res.via_H = std::exp(-pairing);
  return res;
}

Kappa0Result estimate_kappa0(const UnipotentDatum& datum, int block_a, int block_b,
                             std::uint64_t seed) {
  const int na = datum.M.blocks[block_a], nb = datum.M.blocks[block_b];
  const int m = na + nb;
  std::vector<int> coords;
  for (int i = 0; i < na; ++i) coords.push_back(datum.M.block_start(block_a) + i);
  for (int i = 0; i < nb; ++i) coords.push_back(datum.M.block_start(block_b) + i);
  Matrix X0 = submatrix(datum.X0, coords);
  Matrix u = Matrix::Identity(m, m) + X0;
  Positions lower;  // opposite nilpotent of the two-block parabolic
  for (int i = na; i < m; ++i)
    for (int j = 0; j < na; ++j) lower.emplace_back(i, j);
  std::vector<int> I(na);
  for (int i = 0; i < na; ++i) I[i] = i;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(0.5, 1.5);
  Kappa0Result best;
  best.slope_residual = 1e30;
  for (int attempt = 0; attempt < 10; ++attempt) {
    Matrix X = Matrix::Zero(m, m);
    for (auto [i, j] : lower) X(i, j) = mag(rng) * (rng() & 1 ? 1.0 : -1.0);
    Matrix pimat = u * (Matrix::Identity(m, m) + X);
    std::vector<double> xs, ys;
    for (double delta : {1e-3, 1e-4, 1e-5, 1e-6}) {
      Vector a(m);
      for (int i = 0; i < m; ++i) a[i] = i < na ? 1.0 + delta : 1.0;
      Matrix nmat = solve_positions(a, u, pimat, lower);
      double v = minor_norm(nmat.inverse(), I);
      xs.push_back(std::log(delta));
      ys.push_back(2.0 * std::log(v));
    }
    double slope = (ys.back() - ys.front()) / (xs.back() - xs.front());
    Kappa0Result cur;
    cur.kappa0 = static_cast<int>(std::lround(-slope));
    cur.slope_residual = std::abs(-slope - cur.kappa0);
    for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
      double local = -(ys[j + 1] - ys[j]) / (xs[j + 1] - xs[j]);
      cur.slope_residual = std::max(cur.slope_residual, std::abs(local - cur.kappa0));
    }
    cur.rho = 0.5 * cur.kappa0;  // the two-block fundamental weight has varpi(beta^vee)=1
    if (cur.slope_residual < best.slope_residual) best = cur;
    if (best.slope_residual < 0.1) break;
  }
  if (best.kappa0 < 0) throw std::domain_error("estimate_kappa0: negative exponent");
  return best;
}

RhoTable rho_table(const UnipotentDatum& datum, std::uint64_t seed) {
  RhoTable table;
  const int k = datum.M.num_blocks();
  for (int hi = 0; hi < k; ++hi)
    for (int lo = 0; lo < hi; ++lo)
      table[{hi, lo}] = estimate_kappa0(datum, hi, lo, seed + 97 * hi + lo).rho;
  return table;
}

WPLimit w_P_log_limit(const PiElement& pi, const roots::ParabolicDatum& P, int weight_index,
                      const RhoTable& rho) {
  const auto& M = pi.datum.M;
  const int k = M.num_blocks();
  std::vector<int> posP(k);
  for (int pos = 0; pos < k; ++pos) posP[P.block_order[pos]] = pos;
  auto rdat = roots::simple_roots_coroots(P);
  const auto& varpi = rdat.dual_weights[weight_index];
  auto I = leading_coords(P, weight_index);

  // beta in Phi_P cap Phi_{P1bar}: block pairs inverted between the standard
  // order and P's order
  struct Pair { int hi, lo; double pairing; };
  std::vector<Pair> betas;
  for (int bi = 0; bi < k; ++bi)
    for (int bj = 0; bj < k; ++bj) {
      if (bi <= bj || posP[bi] >= posP[bj]) continue;
      auto beta = roots::block_pair_root(M, bi, bj);
      betas.push_back({bi, bj, to_double(dot(varpi, beta))});
    }

  std::vector<double> xs, ys;
  for (double eps : {2e-2, 1e-2, 5e-3, 2.5e-3, 1.25e-3}) {
    std::vector<double> ablk(k);
    for (int b = 0; b < k; ++b) ablk[b] = std::exp(-eps * b);
    Matrix ninv = solve_conjugator(ablk, pi).inverse();
    double val = std::log(minor_norm(ninv, I));
    for (const auto& beta : betas) {
      double abeta = ablk[beta.hi] / ablk[beta.lo];
      val += rho.at({beta.hi, beta.lo}) * beta.pairing *
             std::log(std::abs(abeta - 1.0 / abeta));
    }
    xs.push_back(eps);
    ys.push_back(val);
  }
  WPLimit lim;
  lim.log_value = neville_to_zero(xs, ys, &lim.residual);
  return lim;
}

WeightEvaluation w_M(const PiElement& pi, std::uint64_t seed, int n_lambda) {
  const auto& M = pi.datum.M;
  const int k = M.num_blocks();
  const int r = k - 1;
  WeightEvaluation out;
  if (r == 0) {
    out.value = 1.0;
    return out;
  }
  auto rho = rho_table(pi.datum, seed);
  auto parabolics = roots::parabolics_containing(M);
  std::vector<std::vector<double>> F(parabolics.size(), std::vector<double>(r));
  for (std::size_t p = 0; p < parabolics.size(); ++p)
    for (int i = 0; i < r; ++i) {
      auto lim = w_P_log_limit(pi, parabolics[p], i, rho);
      F[p][i] = lim.log_value;
      out.max_extrapolation_residual = std::max(out.max_extrapolation_residual, lim.residual);
    }

  std::mt19937_64 rng(seed * 2654435761u + 11);
  std::uniform_int_distribution<int> coef(-9, 9);
  double rfact = 1.0;
  for (int i = 2; i <= r; ++i) rfact *= i;
  std::vector<double> values;
  for (int trial = 0; trial < n_lambda; ++trial) {
    std::vector<long long> c(k);
    bool ok = false;
    while (!ok) {
      for (auto& ci : c) ci = coef(rng);
      ok = true;
      for (int i = 0; i < k && ok; ++i)
        for (int j = i + 1; j < k; ++j)
          if (c[i] == c[j]) { ok = false; break; }
    }
    Rational tr(0);
    for (int b = 0; b < k; ++b) tr += Rational(c[b] * M.blocks[b]);
    RationalVec lambda(M.rank());
    for (int b = 0; b < k; ++b)
      for (int i = 0; i < M.blocks[b]; ++i)
        lambda[M.block_start(b) + i] = Rational(c[b]) - tr / Rational(M.rank());

    double val = 0.0;
    for (std::size_t p = 0; p < parabolics.size(); ++p) {
      auto rdat = roots::simple_roots_coroots(parabolics[p]);
      double L = 0.0;
      for (int i = 0; i < r; ++i)
        L += to_double(dot(lambda, rdat.simple_coroots[i])) * F[p][i];
      // r-th t-derivative at 0 of w_P(t Lambda, pi) = exp(t L_P), central
      // differences + one Richardson step
      auto fd = [L, r](double h) {
        auto f = [L](double t) { return std::exp(t * L); };
        switch (r) {
          case 1: return (f(h) - f(-h)) / (2 * h);
          case 2: return (f(h) - 2 * f(0) + f(-h)) / (h * h);
          case 3: return (f(2 * h) - 2 * f(h) + 2 * f(-h) - f(-2 * h)) / (2 * h * h * h);
          default: throw std::invalid_argument("w_M: rank > 4 not supported");
        }
      };
      const double h = 0.05 / (1.0 + std::abs(L));
      auto rich = [&fd](double hh) { return (4.0 * fd(hh / 2) - fd(hh)) / 3.0; };
      double deriv = (16.0 * rich(h / 2) - rich(h)) / 15.0;
      val += deriv / roots::theta_P(parabolics[p], lambda);
      if (trial == 0) out.per_parabolic_L.push_back(L);
    }
    values.push_back(val / rfact);
  }
  out.value = values[0];
  for (double v : values)
    out.lambda_spread = std::max(out.lambda_spread,
                                 std::abs(v - values[0]) / (std::abs(values[0]) + 1e-12));
  return out;
}

double w_M_class(const PiElement& pi, std::uint64_t seed) {
  const auto& M = pi.datum.M;
  double total = 0.0;
  for (const auto& L : roots::levis_containing(M)) {
    double term = 1.0;
    for (std::size_t p = 1; p <= L.parts.size(); ++p) term *= static_cast<double>(p);
    for (const auto& part : L.parts) {
      if (part.size() == 1) continue;
      std::vector<int> coords;
      roots::LeviComposition subM{{}, roots::GroupKind::GL};
      for (int b : part) {
        subM.blocks.push_back(M.blocks[b]);
        for (int i = 0; i < M.blocks[b]; ++i) coords.push_back(M.block_start(b) + i);
      }
      PiElement sub{{subM, submatrix(pi.datum.X0, coords)}, submatrix(pi.Z, coords)};
      term *= w_M(sub, seed).value;
    }
    total += term;
  }
  return total;
}

}  // namespace torsionlab::weights
