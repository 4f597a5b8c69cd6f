// Batch front-end: enumeration tables, geometry checks, weight evaluations,
// orbital integrals over t-grids, expansion fits, zeta assembly, and the
// verification suite.  JSON/CSV artifacts only; deterministic in (config, seed).

#include <CLI11.hpp>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <thread>

#include "torsionlab/asymptotics.hpp"
#include "torsionlab/geometry.hpp"
#include "torsionlab/orbital.hpp"
#include "torsionlab/parametrix.hpp"
#include "torsionlab/roots.hpp"
#include "torsionlab/verify.hpp"
#include "torsionlab/weights.hpp"
#include "torsionlab/zeta.hpp"

using nlohmann::json;
using namespace torsionlab;

namespace {

constexpr int kExitOk = 0, kExitNumerical = 1, kExitUsage = 2;

std::vector<double> parse_t_grid(const std::string& spec) {
  double lo, hi;
  int count;
  char c1, c2;
  std::istringstream is(spec);
  if (!(is >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || lo <= 0 ||
      hi <= lo || count < 2)
    throw CLI::ValidationError("--t-grid", "expected lo:hi:count with 0 < lo < hi");
  std::vector<double> t(count);
  for (int i = 0; i < count; ++i) t[i] = lo * std::pow(hi / lo, double(i) / (count - 1));
  return t;
}

std::vector<int> parse_levi(const std::string& spec) {
  std::vector<int> blocks;
  std::istringstream is(spec);
  std::string tok;
  while (std::getline(is, tok, ',')) blocks.push_back(std::stoi(tok));
  if (blocks.empty()) throw CLI::ValidationError("--levi", "expected comma-separated sizes");
  return blocks;
}

int worker_count() {
  if (const char* env = std::getenv("TORSIONLAB_WORKERS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

// index-parallel map with deterministic output ordering
template <class F>
std::vector<double> parallel_map(const std::vector<double>& xs, F f) {
  std::vector<double> out(xs.size());
  int nw = std::min<int>(worker_count(), static_cast<int>(xs.size()));
  if (nw <= 1) {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = f(xs[i]);
    return out;
  }
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  for (int w = 0; w < nw; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < xs.size(); i = next++) out[i] = f(xs[i]);
    });
  for (auto& th : pool) th.join();
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open output file " + path);
  os << text;
}

std::string csv_of(const std::vector<std::pair<double, double>>& rows,
                   const std::string& header) {
  std::ostringstream os;
  os.precision(17);
  os << header << "\n";
  for (auto [a, b] : rows) os << a << "," << b << "\n";
  return os.str();
}

json rational_vec_json(const RationalVec& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(to_string(q));
  return a;
}

int cmd_roots(int n, const std::string& out) {
  json doc;
  doc["n"] = n;
  json levis = json::array();
  for (const auto& M : roots::enumerate_levis(n, roots::GroupKind::GL)) {
    json jm;
    jm["blocks"] = M.blocks;
    jm["num_parabolics"] = roots::parabolics_containing(M).size();
    jm["num_levis_containing"] = roots::levis_containing(M).size();
    jm["num_parabolics_with_levi_containing"] =
        roots::count_parabolics_with_levi_containing(M);
    roots::ParabolicDatum P{M, {}};
    P.block_order.resize(M.num_blocks());
    for (int i = 0; i < M.num_blocks(); ++i) P.block_order[i] = i;
    auto rd = roots::simple_roots_coroots(P);
    json roots_j = json::array(), weights_j = json::array();
    for (const auto& r : rd.simple_roots) roots_j.push_back(rational_vec_json(r));
    for (const auto& w : rd.dual_weights) weights_j.push_back(rational_vec_json(w));
    jm["simple_roots"] = roots_j;
    jm["dual_weights"] = weights_j;
    levis.push_back(jm);
  }
  doc["levis"] = levis;
  write_text(out, doc.dump(2) + "\n");
  return kExitOk;
}

int cmd_geom(int n, std::uint64_t seed, const std::string& out) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double worst = 0.0;
  json samples = json::array();
  for (int trial = 0; trial < 200; ++trial) {
    geometry::Matrix g(n, n);
    double det = 0.0;
    do {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = U(rng);
      det = g.determinant();
    } while (std::abs(det) < 0.05);
    if (det < 0) g.row(0) *= -1.0;
    g /= std::pow(std::abs(det), 1.0 / n);
    auto pol = geometry::cartan_polar(g);
    auto kk = geometry::kak(g);
    double r = geometry::geodesic_distance(g);
    double hnorm = kk.H.norm();
    worst = std::max(worst, std::abs(r - hnorm));
    if (trial < 10) {
      json row;
      row["r"] = r;
      row["Y_norm"] = pol.Y.norm();
      row["H_norm"] = hnorm;
      samples.push_back(row);
    }
  }
  json doc;
  doc["n"] = n;
  doc["seed"] = seed;
  doc["max_abs_r_minus_H_norm"] = worst;
  doc["samples"] = samples;
  write_text(out, doc.dump(2) + "\n");
  return worst < 1e-10 ? kExitOk : kExitNumerical;
}

int cmd_weight(const std::vector<int>& blocks, const std::string& cls, std::uint64_t seed,
               const std::string& out) {
  roots::LeviComposition M{blocks, roots::GroupKind::GL};
  roots::ParabolicDatum P1{M, {}};
  P1.block_order.resize(M.num_blocks());
  for (int i = 0; i < M.num_blocks(); ++i) P1.block_order[i] = i;
  int q = static_cast<int>(geometry::nilpotent_positions(P1).size());

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  json rows = json::array();
  for (int s = 0; s < 10; ++s) {
    geometry::Vector z(q);
    for (int i = 0; i < q; ++i) {
      do {
        z[i] = U(rng);
      } while (std::abs(z[i]) < 0.05);
    }
    auto pi = weights::make_pi(M, cls, z);
    auto ev = weights::w_M(pi, seed);
    json row;
    row["z"] = std::vector<double>(z.data(), z.data() + q);
    row["w_M"] = ev.value;
    row["lambda_spread"] = ev.lambda_spread;
    row["extrapolation_residual"] = ev.max_extrapolation_residual;
    row["w_M_class"] = weights::w_M_class(pi, seed);
    rows.push_back(row);
  }
  json doc;
  doc["levi"] = blocks;
  doc["class"] = cls;
  doc["seed"] = seed;
  doc["evaluations"] = rows;
  write_text(out, doc.dump(2) + "\n");
  return kExitOk;
}

int cmd_orbital(const std::string& group, const std::vector<int>& blocks, const std::string& cls,
                const std::string& kernel, const std::string& t_grid, double tol,
                const orbital::FiniteOrderConfig& cfg, const std::string& out) {
  orbital::Group g = group == "gl2" ? orbital::Group::GL2 : orbital::Group::GL3;
  int n = g == orbital::Group::GL2 ? 2 : 3;
  int d = n * (n + 1) / 2 - 1;  // dim SL(n)/SO(n)

  auto integral_at = [&](const orbital::Kernel& f) {
    if (cls.rfind("sigma", 0) == 0) {
      if (g == orbital::Group::GL2) return orbital::j_finite_order_gl2(cls, f, cfg).value;
      return orbital::j_finite_order_gl3(cls, +1, +1, "JM", f, cfg).value;
    }
    orbital::ExplicitEntry e{g, blocks, cls};
    return orbital::j_explicit(e, f, tol).value;
  };

  if (kernel == "coord-gaussian") {
    json doc;
    doc["value"] = integral_at(orbital::Kernel::gaussian(1.0));
    write_text(out, doc.dump(2) + "\n");
    return kExitOk;
  }
  if (kernel != "gaussian") throw CLI::ValidationError("--kernel", "gaussian or coord-gaussian");
  auto ts = parse_t_grid(t_grid);
  auto vals = parallel_map(ts, [&](double t) {
    return integral_at(orbital::Kernel::radial(parametrix::SurrogateKernel::gaussian(d), t));
  });
  std::vector<std::pair<double, double>> rows;
  for (std::size_t i = 0; i < ts.size(); ++i) rows.push_back({ts[i], vals[i]});
  write_text(out, csv_of(rows, "t,J"));
  return kExitOk;
}

asymptotics::TraceSamples read_csv_samples(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  asymptotics::TraceSamples samples;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
    std::istringstream ls(line);
    double t, y;
    char c;
    if (ls >> t >> c >> y) samples.push_back({t, y});
  }
  if (samples.size() < 4) throw std::runtime_error("too few samples in " + path);
  return samples;
}

int cmd_expand(const std::string& in, int d, int k, int max_order, int max_log,
               const std::string& out) {
  auto samples = read_csv_samples(in);
  auto fit = asymptotics::fit_expansion(samples, d, k, max_order, max_log);
  json doc;
  doc["d"] = d;
  doc["k"] = k;
  doc["residual"] = fit.residual;
  doc["condition_number"] = fit.condition_number;
  doc["leading_exponent_free_scan"] = asymptotics::leading_exponent(samples, max_log);
  doc["log_degree"] = asymptotics::log_degree(fit);
  json terms = json::array();
  for (const auto& term : fit.terms) {
    json jt;
    jt["exponent"] = term.exponent;
    jt["log_power"] = term.log_power;
    jt["coefficient"] = term.coefficient;
    jt["std_error"] = term.std_error;
    jt["zero_consistent"] = term.zero_consistent;
    terms.push_back(jt);
  }
  doc["terms"] = terms;
  write_text(out, doc.dump(2) + "\n");
  return kExitOk;
}

int cmd_zeta(const std::string& in, const std::string& tail_path, const std::string& s_grid,
             const std::string& out) {
  std::ifstream is(in);
  if (!is) throw std::runtime_error("cannot open " + in);
  json doc = json::parse(is);
  std::vector<zeta::MellinTerm> terms;
  for (const auto& jt : doc.at("terms")) {
    zeta::MellinTerm term;
    term.exponent = jt.at("exponent").get<double>();
    term.log_power = jt.at("log_power").get<int>();
    term.coefficient = jt.at("coefficient").get<double>();
    if (jt.contains("zero_consistent") && jt["zero_consistent"].get<bool>())
      term.coefficient = 0.0;
    terms.push_back(term);
  }
  auto tail = read_csv_samples(tail_path);
  auto z = zeta::MellinZeta::build(terms, tail);

  double lo, hi;
  int count;
  char c1, c2;
  std::istringstream gs(s_grid);
  if (!(gs >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 2)
    throw CLI::ValidationError("--s-grid", "expected lo:hi:count");

  std::ostringstream os;
  os.precision(17);
  os << "s,re_zeta,im_zeta\n";
  for (int i = 0; i < count; ++i) {
    double s = lo + (hi - lo) * i / (count - 1);
    auto v = z(s);
    os << s << "," << v.real() << "," << v.imag() << "\n";
  }
  write_text(out, os.str());
  std::cout.precision(17);
  std::cout << "{\"finite_part_zeta_over_s\": " << zeta::finite_part_zeta_over_s(z) << "}\n";
  return kExitOk;
}

int cmd_verify() {
  auto results = verify::run_all();
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS" : "FAIL") << "  criterion " << r.index << "  " << r.name
              << "  [" << r.detail << "]\n";
    all = all && r.pass;
  }
  return all ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for weighted orbital integrals and regularized torsion"};
  app.require_subcommand(1);

  std::string group = "gl3", levi = "2,1", cls = "trivial", kernel = "gaussian";
  std::string t_grid = "1e-3:1:40", s_grid = "0.5:3:26", in, tail, out, constants;
  std::uint64_t seed = 7;
  double tol = 1e-6;
  int n = 3, d = 5, k = 2, max_order = 4, max_log = 1;

  auto* roots_cmd = app.add_subcommand("roots", "Levi/parabolic enumeration tables");
  roots_cmd->add_option("--n", n, "rank");
  roots_cmd->add_option("--out", out, "output JSON path (default stdout)");

  auto* geom_cmd = app.add_subcommand("geom", "decomposition and distance diagnostics");
  geom_cmd->add_option("--group", group, "gl2|gl3");
  geom_cmd->add_option("--seed", seed, "RNG seed");
  geom_cmd->add_option("--out", out, "output JSON path");

  auto* weight_cmd = app.add_subcommand("weight", "weight-function evaluations");
  weight_cmd->add_option("--levi", levi, "comma-separated block sizes");
  weight_cmd->add_option("--class", cls, "trivial|regular");
  weight_cmd->add_option("--seed", seed, "RNG seed");
  weight_cmd->add_option("--out", out, "output JSON path");

  auto* orbital_cmd = app.add_subcommand("orbital", "weighted orbital integrals");
  orbital_cmd->add_option("--group", group, "gl2|gl3");
  orbital_cmd->add_option("--levi", levi, "comma-separated block sizes");
  orbital_cmd->add_option("--class", cls, "trivial|regular|sigma*");
  orbital_cmd->add_option("--kernel", kernel, "gaussian (radial, over --t-grid) or coord-gaussian");
  orbital_cmd->add_option("--t-grid", t_grid, "lo:hi:count, geometric");
  orbital_cmd->add_option("--tol", tol, "quadrature tolerance");
  orbital_cmd->add_option("--constants", constants, "JSON file with a1,a2,c_log,c_const");
  orbital_cmd->add_option("--out", out, "output CSV path");

  auto* expand_cmd = app.add_subcommand("expand", "fit a small-time expansion to a CSV trace");
  expand_cmd->add_option("--in", in, "input CSV (t,J)")->required();
  expand_cmd->add_option("--d", d, "symmetric-space dimension");
  expand_cmd->add_option("--k", k, "lattice offset parameter");
  expand_cmd->add_option("--max-order", max_order, "highest half-integer step");
  expand_cmd->add_option("--max-log", max_log, "highest log power");
  expand_cmd->add_option("--out", out, "output JSON path");

  auto* zeta_cmd = app.add_subcommand("zeta", "Mellin zeta from an expansion JSON + tail CSV");
  zeta_cmd->add_option("--in", in, "expansion JSON (from expand)")->required();
  zeta_cmd->add_option("--tail", tail, "tail CSV (t,theta), t >= 1")->required();
  zeta_cmd->add_option("--s-grid", s_grid, "lo:hi:count, linear");
  zeta_cmd->add_option("--out", out, "output CSV path");

  auto* verify_cmd = app.add_subcommand("verify", "run the full verification suite");
  verify_cmd->add_option("--tol", tol, "unused; thresholds are criterion-specific");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (roots_cmd->parsed()) return cmd_roots(n, out);
    if (geom_cmd->parsed()) return cmd_geom(group == "gl2" ? 2 : 3, seed, out);
    if (weight_cmd->parsed()) return cmd_weight(parse_levi(levi), cls, seed, out);
    if (orbital_cmd->parsed()) {
      orbital::FiniteOrderConfig cfg;
      cfg.tol = tol;
      if (!constants.empty()) {
        std::ifstream cs(constants);
        if (!cs) throw std::runtime_error("cannot open " + constants);
        json jc = json::parse(cs);
        if (jc.contains("a1")) cfg.a1 = jc["a1"].get<double>();
        if (jc.contains("a2")) cfg.a2 = jc["a2"].get<double>();
        if (jc.contains("c_log")) cfg.c_log = jc["c_log"].get<double>();
        if (jc.contains("c_const")) cfg.c_const = jc["c_const"].get<double>();
      }
      return cmd_orbital(group, parse_levi(levi), cls, kernel, t_grid, tol, cfg, out);
    }
    if (expand_cmd->parsed()) return cmd_expand(in, d, k, max_order, max_log, out);
    if (zeta_cmd->parsed()) return cmd_zeta(in, tail, s_grid, out);
    if (verify_cmd->parsed()) return cmd_verify();
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "{\"error\": \"" << e.what() << "\"}\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
