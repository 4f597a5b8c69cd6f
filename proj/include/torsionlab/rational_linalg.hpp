#ifndef TORSIONLAB_RATIONAL_LINALG_HPP
#define TORSIONLAB_RATIONAL_LINALG_HPP

#include <boost/rational.hpp>
#include <stdexcept>
#include <string>
#include <vector>

namespace torsionlab {

using Rational = boost::rational<long long>;

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

using RationalVec = std::vector<Rational>;
using RationalMat = std::vector<RationalVec>;

inline Rational dot(const RationalVec& a, const RationalVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  Rational s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Solves A x = b by fraction-free-ish Gaussian elimination with pivoting.
inline RationalVec solve(RationalMat A, RationalVec b) {
  const std::size_t n = A.size();
  if (n == 0 || A[0].size() != n || b.size() != n)
    throw std::invalid_argument("solve: need square system");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && A[piv][col] == Rational(0)) ++piv;
    if (piv == n) throw std::domain_error("solve: singular system");
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || A[row][col] == Rational(0)) continue;
      Rational f = A[row][col] / A[col][col];
      for (std::size_t k = col; k < n; ++k) A[row][k] -= f * A[col][k];
      b[row] -= f * b[col];
    }
  }
  RationalVec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / A[i][i];
  return x;
}

inline Rational determinant(RationalMat A) {
  const std::size_t n = A.size();
  Rational det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && A[piv][col] == Rational(0)) ++piv;
    if (piv == n) return Rational(0);
    if (piv != col) {
      std::swap(A[piv], A[col]);
      det = -det;
    }
    det *= A[col][col];
    for (std::size_t row = col + 1; row < n; ++row) {
      if (A[row][col] == Rational(0)) continue;
      Rational f = A[row][col] / A[col][col];
      for (std::size_t k = col; k < n; ++k) A[row][k] -= f * A[col][k];
    }
  }
  return det;
}

}  // namespace torsionlab

#endif
