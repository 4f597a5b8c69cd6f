#include "torsionlab/geometry.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace torsionlab::geometry {

namespace {

// Permutation sending P-ordered coordinates to original ones:
// perm[pos within triangular shape] = original coordinate index.
std::vector<int> order_permutation(const roots::ParabolicDatum& P) {
  std::vector<int> perm;
  for (int pos = 0; pos < P.levi.num_blocks(); ++pos) {
    int b = P.block_order[pos];
    for (int i = 0; i < P.levi.blocks[b]; ++i)
      perm.push_back(P.levi.block_start(b) + i);
  }
  return perm;
}

Matrix sym_function(const Matrix& S, double (*f)(double)) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(S);
  Vector d = es.eigenvalues();
  for (int i = 0; i < d.size(); ++i) d[i] = f(d[i]);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

IwasawaParts iwasawa(const Matrix& g, const roots::ParabolicDatum& P) {
  const int n = static_cast<int>(g.rows());
  if (g.cols() != n || n != P.levi.rank())
    throw std::invalid_argument("iwasawa: size mismatch");
  if (std::abs(g.determinant()) < 1e-300)
    throw std::domain_error("iwasawa: singular matrix");

  auto perm = order_permutation(P);
  Matrix Q = Matrix::Zero(n, n);  // Q * e_pos = e_{perm[pos]}
  for (int pos = 0; pos < n; ++pos) Q(perm[pos], pos) = 1.0;
  Matrix g2 = Q.transpose() * g * Q;  // P becomes standard block upper triangular

  // g2 = T k with T upper triangular, positive diagonal: T T^T = g2 g2^T is a
  // UL factorization, obtained from Cholesky after reversing coordinates.
  Matrix A = g2 * g2.transpose();
  Matrix J = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) J(i, n - 1 - i) = 1.0;
  Eigen::LLT<Matrix> llt(J * A * J);
  if (llt.info() != Eigen::Success) throw std::domain_error("iwasawa: factorization failed");
  Matrix T = J * Matrix(llt.matrixL()) * J;
  Matrix k2 = T.triangularView<Eigen::Upper>().solve(g2);

  // split T = n2 * b, b the block diagonal of T
  const int kblocks = P.levi.num_blocks();
  Matrix b = Matrix::Zero(n, n);
  int off = 0;
  std::vector<int> starts(kblocks), sizes(kblocks);
  for (int pos = 0; pos < kblocks; ++pos) {
    int sz = P.levi.blocks[P.block_order[pos]];
    starts[pos] = off;
    sizes[pos] = sz;
    b.block(off, off, sz, sz) = T.block(off, off, sz, sz);
    off += sz;
  }
  Matrix n2 = T * b.triangularView<Eigen::Upper>().solve(Matrix::Identity(n, n));

  IwasawaParts out;
  out.n = Q * n2 * Q.transpose();
  out.k = Q * k2 * Q.transpose();
  out.H0 = Vector::Zero(n);
  out.block_H.assign(kblocks, 0.0);
  for (int pos = 0; pos < n; ++pos) out.H0[perm[pos]] = std::log(T(pos, pos));
  Matrix m2 = b;
  for (int pos = 0; pos < kblocks; ++pos) {
    double logdet = 0.0;
    for (int i = 0; i < sizes[pos]; ++i) logdet += std::log(T(starts[pos] + i, starts[pos] + i));
    out.block_H[P.block_order[pos]] = logdet;
    m2.block(starts[pos], starts[pos], sizes[pos], sizes[pos]) *=
        std::exp(-logdet / sizes[pos]);
  }
  out.m_part = Q * m2 * Q.transpose();
  return out;
}

PolarParts cartan_polar(const Matrix& g) {
  Matrix A = g * g.transpose();
  PolarParts out;
  out.Y = 0.5 * sym_function(A, [](double x) { return std::log(x); });
  out.k = sym_function(A, [](double x) { return 1.0 / std::sqrt(x); }) * g;
  return out;
}

KAKParts kak(const Matrix& g) {
  Eigen::JacobiSVD<Matrix> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  KAKParts out;
  out.k1 = svd.matrixU();
  out.k2 = svd.matrixV().transpose();
  out.H = svd.singularValues().array().log();
  return out;
}

double geodesic_distance_squared(const Matrix& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(g.transpose() * g, Eigen::EigenvaluesOnly);
  double r2 = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    double l = std::log(es.eigenvalues()[i]);
    r2 += l * l;
  }
  return r2;
}

double geodesic_distance(const Matrix& g) { return std::sqrt(geodesic_distance_squared(g)); }

double exp_jacobian(const Matrix& X) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(X, Eigen::EigenvaluesOnly);
  const auto& h = es.eigenvalues();
  double j = 1.0;
  for (int i = 0; i < h.size(); ++i)
    for (int l = i + 1; l < h.size(); ++l) {
      double d = h[i] - h[l];
      j *= (std::abs(d) < 1e-12) ? 1.0 + d * d / 6.0 : std::sinh(d) / d;
    }
  return j;
}

std::vector<std::pair<int, int>> nilpotent_positions(const roots::ParabolicDatum& P) {
  auto perm = order_permutation(P);
  const int n = P.levi.rank();
  std::vector<int> block_pos(n);  // triangular-shape position of each permuted coordinate
  int off = 0;
  for (int pos = 0; pos < P.levi.num_blocks(); ++pos)
    for (int i = 0; i < P.levi.blocks[P.block_order[pos]]; ++i) block_pos[off++] = pos;
  std::vector<std::pair<int, int>> out;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (block_pos[r] < block_pos[c]) out.emplace_back(perm[r], perm[c]);
  return out;
}

Matrix nilpotent_matrix(const roots::ParabolicDatum& P, const Eigen::VectorXd& x) {
  auto pos = nilpotent_positions(P);
  if (static_cast<int>(pos.size()) != x.size())
    throw std::invalid_argument("nilpotent_matrix: coordinate count mismatch");
  Matrix m = Matrix::Identity(P.levi.rank(), P.levi.rank());
  for (std::size_t r = 0; r < pos.size(); ++r) m(pos[r].first, pos[r].second) = x[r];
  return m;
}

TaylorBoundReport taylor_and_bound_checks(const roots::ParabolicDatum& P,
                                          const std::vector<Eigen::VectorXd>& samples) {
  TaylorBoundReport rep{0.0, 0.0, 1e300, 1e300};
  for (const auto& x : samples) {
    double nx = x.norm();
    if (nx == 0.0) continue;
    double r2 = geodesic_distance_squared(nilpotent_matrix(P, x)) / 8.0;
    double r = std::sqrt(r2);
    double err = std::abs(4.0 * r2 / (nx * nx) - 1.0);
    rep.max_taylor_ratio_error = std::max(rep.max_taylor_ratio_error, err);
    rep.fitted_taylor_constant = std::max(rep.fitted_taylor_constant, err / nx);
    rep.arcsinh_infimum = std::min(rep.arcsinh_infimum, r / std::asinh(nx));
    rep.log_infimum = std::min(rep.log_infimum, r / std::log1p(nx));
  }
  return rep;
}

std::vector<Matrix> symmetric_traceless_basis(int n) {
  std::vector<Matrix> basis;
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Matrix E = Matrix::Zero(n, n);
      E(i, j) = E(j, i) = s;
      basis.push_back(E);
    }
  for (int k = 1; k < n; ++k) {
    Matrix E = Matrix::Zero(n, n);
    double c = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < k; ++i) E(i, i) = c;
    E(k, k) = -k * c;
    basis.push_back(E);
  }
  return basis;
}

}  // namespace torsionlab::geometry
