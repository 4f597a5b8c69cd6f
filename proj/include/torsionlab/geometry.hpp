#ifndef TORSIONLAB_GEOMETRY_HPP
#define TORSIONLAB_GEOMETRY_HPP

#include <Eigen/Dense>
#include <vector>

#include "torsionlab/roots.hpp"

// Geometry of SL(n,R)/SO(n): Iwasawa / Cartan-polar / KAK decompositions,
// geodesic distance to the basepoint, and the Jacobian of the exponential map.
//
// Distance normalization: geodesic_distance uses r(g)^2 = sum_i log^2
// lambda_i(g^T g).  Small-x Taylor statements about horospherical coordinates
// are checked against the rescaled distance r/sqrt(8), the normalization in
// which r(n(x))^2 = ||x||^2/4 + O(||x||^3).

namespace torsionlab::geometry {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct IwasawaParts {
  Matrix n;       // unipotent radical part (triangular in P's block order)
  Vector H0;      // full log-diagonal of the triangular factor, one per coordinate
  Matrix m_part;  // block-diagonal M-part with per-block |det| = 1
  Matrix k;       // orthogonal part
  // per-block components of H_P(g): sum of H0 over each block of P's Levi
  std::vector<double> block_H;
};

struct PolarParts {
  Matrix Y;  // symmetric traceless, p-component
  Matrix k;  // orthogonal
};

struct KAKParts {
  Matrix k1;
  Vector H;  // log singular values, descending
  Matrix k2;
};

// g = n * exp(H) * m * k with n in N_P, exp(H)*m the M_P-part split into its
// central and norm-one factors.  Throws std::domain_error on singular g.
IwasawaParts iwasawa(const Matrix& g, const roots::ParabolicDatum& P);

// g = exp(Y) * k, Y = 1/2 log(g g^T).
PolarParts cartan_polar(const Matrix& g);

KAKParts kak(const Matrix& g);

// r(g x0, x0) with r^2 = sum_i log^2 lambda_i(g^T g).
double geodesic_distance(const Matrix& g);
double geodesic_distance_squared(const Matrix& g);

// Closed-form |det d exp| at X in p: product over i<j of sinh(h_i-h_j)/(h_i-h_j).
double exp_jacobian(const Matrix& X);

// n(x) = Id + sum x_r E_{pos_r} for the positive-root positions of N_P,
// positions listed row-major within the block-upper triangle of P's order.
std::vector<std::pair<int, int>> nilpotent_positions(const roots::ParabolicDatum& P);
Matrix nilpotent_matrix(const roots::ParabolicDatum& P, const Eigen::VectorXd& x);

struct TaylorBoundReport {
  double fitted_taylor_constant;  // C with |4 r^2/||x||^2 - 1| <= C ||x||
  double max_taylor_ratio_error;  // max over samples of |4 r^2/||x||^2 - 1|
  double arcsinh_infimum;         // inf over samples of r(x)/arcsinh(||x||)
  double log_infimum;             // inf over samples of r(x)/log(1+||x||)
};

// Checks the small-x Taylor law (in the r/sqrt(8) normalization) and the
// horosphere lower bounds on the given coordinate samples.
TaylorBoundReport taylor_and_bound_checks(const roots::ParabolicDatum& P,
                                          const std::vector<Eigen::VectorXd>& samples);

// Orthonormal basis (trace form) of symmetric traceless n x n matrices.
std::vector<Matrix> symmetric_traceless_basis(int n);

}  // namespace torsionlab::geometry

#endif
