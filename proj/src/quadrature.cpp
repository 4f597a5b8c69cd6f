#include "torsionlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <queue>
#include <random>
#include <stdexcept>

namespace torsionlab::quadrature {

double MultiPoly::eval(const std::vector<double>& x) const {
  if (terms.empty()) return 1.0;
  double s = 0.0;
  for (const auto& t : terms) {
    double m = t.coeff;
    for (int i = 0; i < dim; ++i)
      for (int e = 0; e < t.exps[i]; ++e) m *= x[i];
    s += m;
  }
  return s;
}

int MultiPoly::total_degree() const {
  int d = 0;
  for (const auto& t : terms) {
    int td = 0;
    for (int e : t.exps) td += e;
    d = std::max(d, td);
  }
  return d;
}

MultiPoly MultiPoly::constant(int dim, double c) {
  return {dim, {{std::vector<int>(dim, 0), c}}};
}

MultiPoly MultiPoly::monomial(int dim, const std::vector<int>& exps, double c) {
  return {dim, {{exps, c}}};
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
}

namespace {

struct Region {
  std::vector<double> lo, hi;
  double value = 0.0;
  double err = 0.0;
  long index = 0;
  bool singular = false;
};

struct Rule {
  std::vector<double> nodes, weights;
};

double eval_tensor(int dim, const std::function<double(const std::vector<double>&)>& f,
                   const Region& r, const Rule& rule) {
  const int n = static_cast<int>(rule.nodes.size());
  std::vector<int> idx(dim, 0);
  std::vector<double> x(dim);
  double vol = 1.0;
  for (int i = 0; i < dim; ++i) vol *= 0.5 * (r.hi[i] - r.lo[i]);
  double sum = 0.0;
  while (true) {
    double w = 1.0;
    for (int i = 0; i < dim; ++i) {
      x[i] = 0.5 * (r.lo[i] + r.hi[i]) + 0.5 * (r.hi[i] - r.lo[i]) * rule.nodes[idx[i]];
      w *= rule.weights[idx[i]];
    }
    double v = f(x);
    if (std::isfinite(v)) sum += w * v;
    int i = 0;
    for (; i < dim; ++i) {
      if (++idx[i] < n) break;
      idx[i] = 0;
    }
    if (i == dim) break;
  }
  return vol * sum;
}

// does the zero set of any singular factor plausibly intersect the region?
// Returns the factor index, or -1.
int straddling_factor(int dim, const Region& r, const AdaptiveOptions& opt,
                      std::vector<double>& center) {
  center.resize(dim);
  for (int i = 0; i < dim; ++i) center[i] = 0.5 * (r.lo[i] + r.hi[i]);
  for (std::size_t l = 0; l < opt.singular_factors.size(); ++l) {
    const auto& pl = opt.singular_factors[l];
    double vc = pl(center);
    bool flip = false;
    std::vector<double> corner(dim);
    for (int mask = 0; mask < (1 << dim) && !flip; ++mask) {
      for (int i = 0; i < dim; ++i) corner[i] = (mask & (1 << i)) ? r.hi[i] : r.lo[i];
      if (pl(corner) * vc < 0.0) flip = true;
    }
    // proximity test: first-order bound on the factor's variation over the
    // region; gradients probed off-center too since a component can vanish
    // on a symmetry line
    double bound = 0.0;
    for (int i = 0; i < dim && !flip; ++i) {
      double w = r.hi[i] - r.lo[i];
      double g = 0.0;
      for (double frac : {0.0, 0.25, -0.25}) {
        std::vector<double> xp = center, xm = center;
        double h = 1e-4 * (1.0 + std::abs(center[i])) + 1e-6 * w;
        xp[i] += frac * w + h;
        xm[i] += frac * w - h;
        g = std::max(g, std::abs(pl(xp) - pl(xm)) / (2 * h));
      }
      bound += 0.75 * g * w;  // half-width variation with 1.5x slack so that
                              // slabs ending exactly on the zero set stay flagged
    }
    if (flip || std::abs(vc) < bound) return static_cast<int>(l);
  }
  return -1;
}

}  // namespace

QuadResult integrate_adaptive(int dim,
                              const std::function<double(const std::vector<double>&)>& f,
                              std::vector<double> lo, std::vector<double> hi,
                              const AdaptiveOptions& opt) {
  if (dim < 1 || dim > 4) throw std::invalid_argument("integrate_adaptive: dim must be 1..4");
  int n_hi = opt.n_hi, n_lo = opt.n_lo;
  if (n_hi == 0) {
    if (dim <= 2) { n_hi = 11; n_lo = 7; }
    else if (dim == 3) { n_hi = 9; n_lo = 7; }
    else { n_hi = 7; n_lo = 5; }
  }
  Rule rhi, rlo;
  gauss_legendre(n_hi, rhi.nodes, rhi.weights);
  gauss_legendre(n_lo, rlo.nodes, rlo.weights);

  auto make_region = [&](std::vector<double> l, std::vector<double> h, long idx) {
    Region r{std::move(l), std::move(h), 0.0, 0.0, idx, false};
    r.value = eval_tensor(dim, f, r, rhi);
    r.err = std::abs(r.value - eval_tensor(dim, f, r, rlo));
    return r;
  };

  // max-heap on error, index tie-break for determinism
  auto cmp = [](const Region& a, const Region& b) {
    if (a.err != b.err) return a.err < b.err;
    return a.index > b.index;
  };
  std::priority_queue<Region, std::vector<Region>, decltype(cmp)> heap(cmp);
  long next_index = 0;
  heap.push(make_region(std::move(lo), std::move(hi), next_index++));
  double total_err = heap.top().err;
  long singular_count = 0;
  bool converged = true;

  // force a minimum subdivision before trusting a zero error estimate: a
  // narrowly supported integrand can vanish on every node of a coarse rule
  long min_init = opt.min_regions > 0 ? opt.min_regions : (1L << (2 * dim));

  std::vector<Region> done;
  std::vector<double> center;
  while (!heap.empty()) {
    bool forcing = next_index < min_init;
    if (!forcing && total_err <= opt.tol) break;
    if (next_index >= opt.max_regions) {
      converged = false;
      break;
    }
    Region r = heap.top();
    heap.pop();
    total_err -= r.err;
    if (!forcing && r.err == 0.0) {
      done.push_back(std::move(r));
      total_err += done.back().err;
      break;  // heap is error-sorted; nothing left to refine
    }
    int axis = 0;
    int widest = 0;
    for (int i = 1; i < dim; ++i)
      if (r.hi[i] - r.lo[i] > r.hi[widest] - r.lo[widest]) widest = i;
    int sf = forcing ? -1 : straddling_factor(dim, r, opt, center);
    if (sf >= 0) {
      ++singular_count;
      // split fastest along the variation of the offending factor; probe off-center
      // points too, since a gradient component can vanish on a symmetry line
      double best = -1.0;
      for (int i = 0; i < dim; ++i) {
        double w = r.hi[i] - r.lo[i];
        double g = 0.0;
        for (double frac : {0.0, 0.25, -0.25}) {
          std::vector<double> xp = center, xm = center;
          double h = 1e-4 * (1.0 + std::abs(center[i])) + 1e-6 * w;
          xp[i] += frac * w + h;
          xm[i] += frac * w - h;
          g = std::max(g,
                       std::abs(opt.singular_factors[sf](xp) - opt.singular_factors[sf](xm)) /
                           (2 * h));
        }
        double score = g * w;
        if (score > best) {
          best = score;
          axis = i;
        }
      }
    } else {
      axis = widest;
    }
    double mid = 0.5 * (r.lo[axis] + r.hi[axis]);
    auto lo1 = r.lo, hi1 = r.hi, lo2 = r.lo, hi2 = r.hi;
    hi1[axis] = mid;
    lo2[axis] = mid;
    Region c1 = make_region(std::move(lo1), std::move(hi1), next_index++);
    Region c2 = make_region(std::move(lo2), std::move(hi2), next_index++);
    total_err += c1.err + c2.err;
    heap.push(std::move(c1));
    heap.push(std::move(c2));
  }
  while (!heap.empty()) {
    done.push_back(heap.top());
    heap.pop();
  }
  std::sort(done.begin(), done.end(),
            [](const Region& a, const Region& b) { return a.index < b.index; });
  QuadResult out;
  out.regions_used = static_cast<long>(done.size());
  out.singular_regions = singular_count;
  out.converged = converged;
  for (const auto& r : done) {
    out.value += r.value;
    out.error_estimate += r.err;
  }
  return out;
}

namespace {

std::function<double(const std::vector<double>&)> make_integrand(const LogGaussIntegrand& I,
                                                                 bool abs_logs) {
  return [I, abs_logs](const std::vector<double>& x) {
    double n2 = 0.0;
    for (double xi : x) n2 += xi * xi;
    double v = std::exp(-I.a * n2) * I.poly.eval(x);
    for (const auto& lf : I.log_factors) {
      double p = std::abs(lf.poly.eval(x));
      double lg = std::log(std::max(p, 1e-300));
      if (abs_logs) lg = std::abs(lg);
      for (int m = 0; m < lf.power; ++m) v *= lg;
    }
    return v;
  };
}

void validate(const LogGaussIntegrand& I) {
  if (I.dim < 1 || I.dim > 4) throw std::invalid_argument("integrand: dim must be 1..4");
  if (!(I.a > 0.0)) throw std::invalid_argument("integrand: a must be positive");
  if (!finiteness_guard(I))
    throw std::invalid_argument("integrand: log factor non-homogeneous or zero");
}

QuadResult run(const LogGaussIntegrand& I, double tol, bool abs_logs) {
  validate(I);
  double R = truncation_radius(I, tol);
  AdaptiveOptions opt;
  opt.tol = tol;
  opt.max_regions = I.dim <= 2 ? 300000 : (I.dim == 3 ? 80000 : 30000);
  for (const auto& lf : I.log_factors) {
    MultiPoly p = lf.poly;
    opt.singular_factors.push_back([p](const std::vector<double>& x) { return p.eval(x); });
  }
  std::vector<double> lo(I.dim, -R), hi(I.dim, R);
  return integrate_adaptive(I.dim, make_integrand(I, abs_logs), std::move(lo), std::move(hi), opt);
}

}  // namespace

double truncation_radius(const LogGaussIntegrand& I, double tol) {
  // outside radius R the integrand is bounded by C (1+R)^D e^{-a R^2} with D
  // covering the polynomial degree, the log growth and the surface factor
  int D = I.poly.total_degree() + I.dim + 1;
  for (const auto& lf : I.log_factors) D += lf.power;
  double coeff = 0.0;
  for (const auto& t : I.poly.terms) coeff += std::abs(t.coeff);
  if (I.poly.terms.empty()) coeff = 1.0;
  double R = 2.0 / std::sqrt(I.a);
  while (R < 40.0 &&
         coeff * std::pow(1.0 + R, D) * std::exp(-I.a * R * R) * 10.0 > tol / 10.0)
    R += 0.25;
  return R;
}

QuadResult integrate_signed(const LogGaussIntegrand& I, double tol) {
  return run(I, tol, false);
}

QuadResult integrate(const LogGaussIntegrand& I, double tol) { return run(I, tol, true); }

MCResult mc_oracle(const LogGaussIntegrand& I, std::uint64_t seed, long n_samples) {
  if (n_samples < 1000) throw std::invalid_argument("mc_oracle: need >= 1000 samples");
  validate(I);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, std::sqrt(0.5 / I.a));
  // weight = integrand / density = p(x) * logs * (pi/a)^{dim/2}
  const double norm = std::pow(M_PI / I.a, 0.5 * I.dim);
  std::vector<double> x(I.dim);
  double sum = 0.0, sum2 = 0.0;
  for (long s = 0; s < n_samples; ++s) {
    for (int i = 0; i < I.dim; ++i) x[i] = dist(rng);
    double v = I.poly.eval(x);
    for (const auto& lf : I.log_factors) {
      double lg = std::log(std::max(std::abs(lf.poly.eval(x)), 1e-300));
      for (int m = 0; m < lf.power; ++m) v *= lg;
    }
    sum += v;
    sum2 += v * v;
  }
  MCResult r;
  r.n_samples = n_samples;
  double mean = sum / n_samples;
  double var = std::max(0.0, sum2 / n_samples - mean * mean);
  r.estimate = norm * mean;
  r.stderr_est = norm * std::sqrt(var / n_samples);
  return r;
}

MCResult mc_box(int dim, const std::function<double(const std::vector<double>&)>& f,
                const std::vector<double>& lo, const std::vector<double>& hi,
                std::uint64_t seed, long n_samples) {
  if (n_samples < 1000) throw std::invalid_argument("mc_box: need >= 1000 samples");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double vol = 1.0;
  for (int i = 0; i < dim; ++i) vol *= hi[i] - lo[i];
  std::vector<double> x(dim);
  double sum = 0.0, sum2 = 0.0;
  for (long s = 0; s < n_samples; ++s) {
    for (int i = 0; i < dim; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * u(rng);
    double v = f(x);
    if (!std::isfinite(v)) v = 0.0;
    sum += v;
    sum2 += v * v;
  }
  double mean = sum / n_samples;
  double var = std::max(0.0, sum2 / n_samples - mean * mean);
  return {vol * mean, vol * std::sqrt(var / n_samples), n_samples};
}

bool finiteness_guard(const LogGaussIntegrand& I) {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& lf : I.log_factors) {
    bool nonzero = false;
    for (int trial = 0; trial < 16; ++trial) {
      std::vector<double> x(I.dim);
      for (auto& xi : x) xi = u(rng);
      double base = lf.poly.eval(x);
      if (std::abs(base) > 1e-12) nonzero = true;
      for (double s : {2.0, 0.5, 3.0}) {
        std::vector<double> sx(I.dim);
        for (int i = 0; i < I.dim; ++i) sx[i] = s * x[i];
        double expect = std::pow(s, lf.degree) * base;
        double got = lf.poly.eval(sx);
        if (std::abs(got - expect) > 1e-9 * (1.0 + std::abs(expect))) return false;
      }
    }
    if (!nonzero) return false;
  }
  return true;
}

LogGaussIntegrand LogGaussIntegrand::from_json(const std::string& json_text) {
  auto j = nlohmann::json::parse(json_text);
  LogGaussIntegrand I;
  I.dim = j.at("dim").get<int>();
  I.a = j.at("a").get<double>();
  I.poly.dim = I.dim;
  if (j.contains("poly"))
    for (const auto& t : j["poly"])
      I.poly.terms.push_back({t.at("exps").get<std::vector<int>>(), t.at("coeff").get<double>()});
  if (j.contains("logs"))
    for (const auto& lf : j["logs"]) {
      LogFactor f;
      f.poly.dim = I.dim;
      for (const auto& t : lf.at("terms"))
        f.poly.terms.push_back(
            {t.at("exps").get<std::vector<int>>(), t.at("coeff").get<double>()});
      f.degree = lf.at("degree").get<int>();
      f.power = lf.value("power", 1);
      I.log_factors.push_back(std::move(f));
    }
  return I;
}

}  // namespace torsionlab::quadrature
