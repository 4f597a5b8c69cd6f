#include "torsionlab/orbital.hpp"

#include <cmath>
#include <stdexcept>

#include "torsionlab/weights.hpp"

namespace torsionlab::orbital {

namespace {

double clog(double v) { return std::log(std::max(std::abs(v), 1e-300)); }

Matrix gl2_u(double x) {
  Matrix g = Matrix::Identity(2, 2);
  g(0, 1) = x;
  return g;
}

Matrix gl3_u(double x, double y, double z) {
  Matrix g = Matrix::Identity(3, 3);
  g(0, 1) = x;
  g(0, 2) = y;
  g(1, 2) = z;
  return g;
}

Matrix gl3_u_right(double x, double y) {  // radical of the (2,1) parabolic
  return gl3_u(0.0, x, y);
}

enum class Cat { GL2M0, GL3M1Trivial, GL3M1Regular, GL3M0 };

Cat classify(const ExplicitEntry& e) {
  if (e.group == Group::GL2 && e.levi_blocks == std::vector<int>{1, 1} &&
      e.class_label == "trivial")
    return Cat::GL2M0;
  if (e.group == Group::GL3 && e.levi_blocks == std::vector<int>{2, 1}) {
    if (e.class_label == "trivial") return Cat::GL3M1Trivial;
    if (e.class_label == "regular") return Cat::GL3M1Regular;
  }
  if (e.group == Group::GL3 && e.levi_blocks == std::vector<int>{1, 1, 1} &&
      e.class_label == "trivial")
    return Cat::GL3M0;
  throw std::invalid_argument("no explicit weight for this (group, levi, class)");
}

// box side length R such that the boundary contribution estimate drops
// below tol; superpolynomial kernel decay makes this terminate
double probe_radius(int dim, const std::function<double(const std::vector<double>&)>& mag,
                    double tol, double r0, double cap) {
  double R = r0;
  while (R < cap) {
    double mx = 0.0;
    int total = 1;
    for (int i = 0; i < dim; ++i) total *= 3;
    for (int pat = 0; pat < total; ++pat) {
      std::vector<double> x(dim);
      int q = pat;
      bool on_boundary = false;
      for (int i = 0; i < dim; ++i) {
        x[i] = R * ((q % 3) - 1);
        if (q % 3 != 1) on_boundary = true;
        q /= 3;
      }
      if (!on_boundary) continue;  // skip the all-center pattern
      double v = mag(x);
      if (std::isfinite(v)) mx = std::max(mx, std::abs(v));
    }
    if (mx * std::pow(2.0 * R, dim) < 0.1 * tol) return R;
    R *= 1.3;
  }
  return cap;
}

quadrature::QuadResult adaptive_box(int dim,
                                    const std::function<double(const std::vector<double>&)>& f,
                                    const std::vector<double>& lo, const std::vector<double>& hi,
                                    double tol, long max_regions,
                                    std::vector<std::function<double(const std::vector<double>&)>>
                                        singular = {}) {
  quadrature::AdaptiveOptions opt;
  opt.tol = tol;
  opt.max_regions = max_regions;
  opt.singular_factors = std::move(singular);
  return quadrature::integrate_adaptive(dim, f, lo, hi, opt);
}

std::vector<double> box_lo(int dim, double R) { return std::vector<double>(dim, -R); }
std::vector<double> box_hi(int dim, double R) { return std::vector<double>(dim, R); }

}  // namespace

Kernel Kernel::gaussian(double a) {
  Kernel k;
  k.kind = Kind::GaussianCoords;
  k.a = a;
  return k;
}

Kernel Kernel::radial(parametrix::SurrogateKernel profile, double t) {
  Kernel k;
  k.kind = Kind::Radial;
  k.profile = std::move(profile);
  k.t = t;
  return k;
}

double Kernel::operator()(const std::vector<double>& x, const Matrix& g) const {
  if (kind == Kind::GaussianCoords) {
    double s = 0.0;
    for (double xi : x) s += xi * xi;
    return std::exp(-a * s);
  }
  return profile(geometry::geodesic_distance_squared(g), t);
}

int explicit_dimension(const ExplicitEntry& e) {
  switch (classify(e)) {
    case Cat::GL2M0: return 1;
    case Cat::GL3M1Trivial: return 2;
    default: return 3;
  }
}

Matrix explicit_embedding(const ExplicitEntry& e, const std::vector<double>& x) {
  switch (classify(e)) {
    case Cat::GL2M0: return gl2_u(x[0]);
    case Cat::GL3M1Trivial: return gl3_u_right(x[0], x[1]);
    default: return gl3_u(x[0], x[1], x[2]);
  }
}

double explicit_weight(const ExplicitEntry& e, const std::vector<double>& x) {
  switch (classify(e)) {
    case Cat::GL2M0: return clog(x[0]);
    case Cat::GL3M1Trivial: return std::log(std::max(x[0] * x[0] + x[1] * x[1], 1e-300));
    case Cat::GL3M1Regular: return clog(x[0] * x[2]);
    case Cat::GL3M0: {
      double lx = clog(x[0]), lz = clog(x[2]);
      return lx * lz + lx * lx + lz * lz;
    }
  }
  throw std::logic_error("explicit_weight");
}

std::vector<quadrature::LogGaussIntegrand> explicit_integrands(const ExplicitEntry& e, double a) {
  using quadrature::LogFactor;
  using quadrature::LogGaussIntegrand;
  using quadrature::MultiPoly;
  auto make = [a](int dim, std::vector<LogFactor> logs) {
    LogGaussIntegrand I;
    I.dim = dim;
    I.a = a;
    I.log_factors = std::move(logs);
    return I;
  };
  switch (classify(e)) {
    case Cat::GL2M0:
      return {make(1, {{MultiPoly::monomial(1, {1}), 1, 1}})};
    case Cat::GL3M1Trivial: {
      MultiPoly q{2, {{{2, 0}, 1.0}, {{0, 2}, 1.0}}};
      return {make(2, {{q, 2, 1}})};
    }
    case Cat::GL3M1Regular:
      return {make(3, {{MultiPoly::monomial(3, {1, 0, 1}), 2, 1}})};
    case Cat::GL3M0: {
      LogFactor lx{MultiPoly::monomial(3, {1, 0, 0}), 1, 1};
      LogFactor lz{MultiPoly::monomial(3, {0, 0, 1}), 1, 1};
      LogFactor lx2 = lx, lz2 = lz;
      lx2.power = 2;
      lz2.power = 2;
      return {make(3, {lx, lz}), make(3, {lx2}), make(3, {lz2})};
    }
  }
  throw std::logic_error("explicit_integrands");
}

OrbitalResult j_explicit(const ExplicitEntry& e, const Kernel& f, double tol) {
  const int dim = explicit_dimension(e);
  auto integrand = [&](const std::vector<double>& x) {
    return f(x, explicit_embedding(e, x)) * explicit_weight(e, x);
  };
  double R;
  if (f.kind == Kernel::Kind::GaussianCoords) {
    double worst = 0.0;
    for (const auto& I : explicit_integrands(e, f.a))
      worst = std::max(worst, quadrature::truncation_radius(I, tol));
    R = worst;
  } else {
    R = probe_radius(dim, integrand, tol, 1.0, 1e4);
  }
  std::vector<std::function<double(const std::vector<double>&)>> sing;
  switch (classify(e)) {
    case Cat::GL2M0:
      sing.push_back([](const std::vector<double>& x) { return x[0]; });
      break;
    case Cat::GL3M1Trivial:
      sing.push_back([](const std::vector<double>& x) { return x[0] * x[0] + x[1] * x[1]; });
      break;
    default:
      sing.push_back([](const std::vector<double>& x) { return x[0]; });
      sing.push_back([](const std::vector<double>& x) { return x[2]; });
      break;
  }
  long budget = dim == 1 ? 200000 : dim == 2 ? 60000 : 25000;
  auto q = adaptive_box(dim, integrand, box_lo(dim, R), box_hi(dim, R), tol, budget, sing);
  return {q.value, q};
}

OrbitalResult j_invariant(Group g, const std::string& class_label, const Kernel& f, double tol) {
  if (class_label == "trivial") {
    int n = g == Group::GL2 ? 2 : 3;
    OrbitalResult r;
    r.value = f({}, Matrix::Identity(n, n));
    r.diagnostics.converged = true;
    return r;
  }
  int dim;
  std::function<Matrix(const std::vector<double>&)> emb;
  if (g == Group::GL2 && class_label == "regular") {
    dim = 1;
    emb = [](const std::vector<double>& x) { return gl2_u(x[0]); };
  } else if (g == Group::GL3 && class_label == "subregular") {
    dim = 2;
    emb = [](const std::vector<double>& x) { return gl3_u_right(x[0], x[1]); };
  } else if (g == Group::GL3 && class_label == "regular") {
    dim = 3;
    emb = [](const std::vector<double>& x) { return gl3_u(x[0], x[1], x[2]); };
  } else {
    throw std::invalid_argument("j_invariant: unknown class " + class_label);
  }
  auto integrand = [&](const std::vector<double>& x) { return f(x, emb(x)); };
  double R = f.kind == Kernel::Kind::GaussianCoords
                 ? std::sqrt((std::log(1.0 / tol) + 5.0 * dim) / f.a)
                 : probe_radius(dim, integrand, tol, 1.0, 1e4);
  long budget = dim == 1 ? 200000 : dim == 2 ? 60000 : 25000;
  auto q = adaptive_box(dim, integrand, box_lo(dim, R), box_hi(dim, R), tol, budget);
  return {q.value, q};
}

double alpha_elliptic(int i) {
  if (i == 2) return std::sqrt(2.0) * std::sin(M_PI / 2);
  if (i == 3) return std::sqrt(2.0) * std::sin(M_PI / 3);
  throw std::invalid_argument("alpha_elliptic: i must be 2 or 3");
}

Matrix elliptic_conjugate_gl2(int i, int sign, double X) {
  double theta = i == 2 ? M_PI / 2 : M_PI / 3;
  if (i != 2 && i != 3) throw std::invalid_argument("elliptic class index must be 2 or 3");
  Matrix g(2, 2);
  g(0, 0) = std::cos(theta);
  g(0, 1) = std::exp(-2 * X) * std::sin(theta);
  g(1, 0) = -std::exp(2 * X) * std::sin(theta);
  g(1, 1) = std::cos(theta);
  return sign < 0 ? Matrix(-g) : g;
}

double elliptic_r2(int i, int sign, double X) {
  // With Y the KAK radial part (top singular value e^Y), one has exactly
  // sinh Y = sin(theta_i) sinh(2X), so the small-X law r^2 = 8 alpha_i^2 X^2
  // with alpha_i = sqrt(2) sin(theta_i) holds for r^2 = 4 Y^2.
  Matrix g = elliptic_conjugate_gl2(i, sign, X);
  Eigen::SelfAdjointEigenSolver<Matrix> es(g.transpose() * g);
  double Y = 0.5 * std::log(es.eigenvalues().maxCoeff());
  return 4.0 * Y * Y;
}

OrbitalResult j_finite_order_gl2(const std::string& label, const Kernel& f,
                                 const FiniteOrderConfig& cfg) {
  if (label == "sigma1") {
    auto integrand = [&](const std::vector<double>& x) {
      return f(x, gl2_u(x[0])) * (cfg.a1 * std::log1p(x[0] * x[0]) + cfg.a2);
    };
    double R = probe_radius(1, integrand, cfg.tol, 1.0, 1e4);
    auto q = adaptive_box(1, integrand, {-R}, {R}, cfg.tol, 100000);
    return {q.value, q};
  }
  if (label.size() == 7 && label.compare(0, 5, "sigma") == 0) {
    int i = label[5] - '0';
    int sign = label[6] == '-' ? -1 : 1;
    auto integrand = [&](const std::vector<double>& x) {
      return f(x, elliptic_conjugate_gl2(i, sign, x[0])) * std::sinh(2 * x[0]);
    };
    double X = probe_radius(1, integrand, cfg.tol, 1.0, 50.0);
    auto q = adaptive_box(1, integrand, {0.0}, {X}, cfg.tol, 100000);
    return {q.value, q};
  }
  throw std::invalid_argument("j_finite_order_gl2: unknown class " + label);
}

OrbitalResult j_finite_order_gl3(const std::string& label, int s1, int s2,
                                 const std::string& op, const Kernel& f,
                                 const FiniteOrderConfig& cfg) {
  const double sgn1 = s1 < 0 ? -1.0 : 1.0;
  if (label == "sigma2" || label == "sigma3") {
    double theta = label == "sigma2" ? M_PI / 2 : M_PI / 3;
    Matrix sigma = Matrix::Zero(3, 3);
    sigma(0, 0) = std::cos(theta);
    sigma(0, 1) = std::sin(theta);
    sigma(1, 0) = -std::sin(theta);
    sigma(1, 1) = std::cos(theta);
    sigma(2, 2) = s2 < 0 ? -1.0 : 1.0;
    sigma *= sgn1;
    bool weighted = op == "JM";
    if (!weighted && op != "JG") throw std::invalid_argument("op must be JM or JG");
    auto point = [&](const std::vector<double>& v) {
      double X = v[0], phi = v[1], x = v[2], y = v[3];
      Matrix A(2, 2);
      A(0, 0) = std::exp(X) * std::cos(phi);
      A(0, 1) = std::exp(X) * std::sin(phi);
      A(1, 0) = -std::exp(-X) * std::sin(phi);
      A(1, 1) = std::exp(-X) * std::cos(phi);
      Matrix m = Matrix::Identity(3, 3);
      m.topLeftCorner(2, 2) = A;
      Matrix c = m.inverse() * sigma * m;
      double w = 1.0;
      if (weighted) {
        Eigen::Vector2d xy(x, y);
        Eigen::Matrix2d block = Eigen::Matrix2d::Identity() - c.topLeftCorner(2, 2);
        Eigen::Vector2d sol = block.lu().solve(xy);
        w = std::log1p(sol.squaredNorm());
      }
      return f(v, c * gl3_u_right(x, y)) * w * std::sinh(2 * X);
    };
    // radial truncation of the KAK parameter, then of the radical coordinates
    auto xprobe = [&](const std::vector<double>& v) { return point({v[0], 0.3, 0.1, 0.1}); };
    double Xmax = probe_radius(1, xprobe, cfg.tol, 1.0, 50.0);
    auto rprobe = [&](const std::vector<double>& v) {
      double mx = 0.0;
      for (double X : {0.0, 0.5 * Xmax, Xmax})
        mx = std::max(mx, std::abs(point({X, 0.3, v[0], v[1]})));
      return mx;
    };
    double R = probe_radius(2, rprobe, cfg.tol, 1.0, 1e4);
    auto q = adaptive_box(4, point, {0.0, 0.0, -R, -R}, {Xmax, 2 * M_PI, R, R}, cfg.tol, 20000);
    return {q.value, q};
  }
  if (label == "sigma1") {
    Matrix sigma = sgn1 * Matrix::Identity(3, 3);
    sigma(2, 2) = -sgn1;
    Matrix u1 = gl3_u(1.0, 0.0, 0.0);
    std::function<double(const std::vector<double>&)> integrand;
    int dim;
    if (op == "JG_U") {
      dim = 2;
      integrand = [&, sigma](const std::vector<double>& v) {
        return f(v, sigma * gl3_u_right(v[0], v[1]));
      };
    } else if (op == "JG_u1") {
      dim = 3;
      integrand = [&, sigma](const std::vector<double>& v) {
        return f(v, sigma * gl3_u(v[0], v[1], v[2]));
      };
    } else if (op == "JM_U") {
      dim = 2;
      integrand = [&, sigma](const std::vector<double>& v) {
        return f(v, sigma * gl3_u_right(v[0], v[1])) * std::log1p(v[0] * v[0] + v[1] * v[1]);
      };
    } else if (op == "JM_u1") {
      dim = 3;
      integrand = [&, sigma, u1](const std::vector<double>& v) {
        Matrix u = gl3_u(v[0], 0.0, 0.0) * gl3_u_right(v[1], v[2]);
        return f(v, sigma * u1 * u) * std::log1p(v[1] * v[1] + v[2] * v[2]);
      };
    } else if (op == "JM0") {
      dim = 3;
      integrand = [&, sigma](const std::vector<double>& v) {
        Matrix u = gl3_u(v[0], 0.0, 0.0) * gl3_u_right(v[1], v[2]);
        double w = std::log1p(v[1] * v[1] + v[2] * v[2]) + cfg.c_log * clog(v[0]) + cfg.c_const;
        return f(v, sigma * u) * w;
      };
    } else {
      throw std::invalid_argument("j_finite_order_gl3: unknown op " + op);
    }
    double R = probe_radius(dim, integrand, cfg.tol, 1.0, 1e4);
    std::vector<std::function<double(const std::vector<double>&)>> sing;
    if (op == "JM0") sing.push_back([](const std::vector<double>& v) { return v[0]; });
    auto q = adaptive_box(dim, integrand, box_lo(dim, R), box_hi(dim, R), cfg.tol,
                          dim == 2 ? 60000 : 25000, sing);
    return {q.value, q};
  }
  throw std::invalid_argument("j_finite_order_gl3: unknown class " + label);
}

OrbitalResult j_generic(const roots::LeviComposition& M, const std::string& class_label,
                        const Kernel& f, double tol, std::uint64_t seed) {
  roots::ParabolicDatum P1{M, {}};
  for (int b = 0; b < M.num_blocks(); ++b) P1.block_order.push_back(b);
  auto positions = geometry::nilpotent_positions(P1);
  const int dim = static_cast<int>(positions.size());
  auto integrand = [&](const std::vector<double>& x) -> double {
    for (double xi : x)
      if (std::abs(xi) < 1e-12) return 0.0;
    Eigen::VectorXd xv(dim);
    for (int i = 0; i < dim; ++i) xv[i] = x[i];
    double w;
    try {
      w = weights::w_M_class(weights::make_pi(M, class_label, xv), seed);
    } catch (const std::exception&) {
      return 0.0;
    }
    double v = f(x, geometry::nilpotent_matrix(P1, xv)) * w;
    return std::isfinite(v) ? v : 0.0;
  };
  double R = f.kind == Kernel::Kind::GaussianCoords
                 ? std::sqrt((std::log(1.0 / tol) + 5.0 * dim) / f.a)
                 : probe_radius(dim, integrand, tol, 1.0, 1e4);
  std::vector<std::function<double(const std::vector<double>&)>> sing;
  for (int i = 0; i < dim; ++i)
    sing.push_back([i](const std::vector<double>& x) { return x[i]; });
  long budget = dim == 1 ? 400 : dim == 2 ? 250 : 120;
  auto q = adaptive_box(dim, integrand, box_lo(dim, R), box_hi(dim, R), tol, budget, sing);
  return {q.value, q};
}

}  // namespace torsionlab::orbital
