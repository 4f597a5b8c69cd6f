#include "torsionlab/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace torsionlab::roots {

std::vector<LeviComposition> enumerate_levis(int n, GroupKind kind) {
  if (n < 2) throw std::invalid_argument("enumerate_levis: rank must be >= 2");
  std::vector<LeviComposition> out;
  // bit i of mask set <=> cut between coordinates i and i+1
  for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
    LeviComposition M;
    M.kind = kind;
    int run = 1;
    for (int i = 0; i < n - 1; ++i) {
      if (mask & (1u << i)) {
        M.blocks.push_back(run);
        run = 1;
      } else {
        ++run;
      }
    }
    M.blocks.push_back(run);
    out.push_back(std::move(M));
  }
  return out;
}

std::vector<ParabolicDatum> parabolics_containing(const LeviComposition& M) {
  std::vector<int> order(M.num_blocks());
  std::iota(order.begin(), order.end(), 0);
  std::vector<ParabolicDatum> out;
  do {
    out.push_back({M, order});
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

std::vector<SetPartition> levis_containing(const LeviComposition& M) {
  const int k = M.num_blocks();
  // restricted growth strings
  std::vector<SetPartition> out;
  std::vector<int> rgs(k, 0);
  while (true) {
    int nparts = *std::max_element(rgs.begin(), rgs.end()) + 1;
    SetPartition sp;
    sp.parts.assign(nparts, {});
    for (int i = 0; i < k; ++i) sp.parts[rgs[i]].push_back(i);
    out.push_back(std::move(sp));
    // next RGS
    int i = k - 1;
    for (; i > 0; --i) {
      int cap = *std::max_element(rgs.begin(), rgs.begin() + i) + 1;
      if (rgs[i] < cap) break;
    }
    if (i == 0) break;
    ++rgs[i];
    std::fill(rgs.begin() + i + 1, rgs.end(), 0);
  }
  return out;
}

long long count_parabolics_with_levi_containing(const LeviComposition& M) {
  long long total = 0;
  for (const auto& L : levis_containing(M)) {
    long long f = 1;
    for (std::size_t i = 2; i <= L.parts.size(); ++i) f *= static_cast<long long>(i);
    total += f;
  }
  return total;
}

RationalVec block_pair_root(const LeviComposition& M, int a, int b) {
  const int n = M.rank();
  RationalVec v(n, Rational(0));
  for (int i = 0; i < M.blocks[a]; ++i) v[M.block_start(a) + i] = Rational(1, M.blocks[a]);
  for (int i = 0; i < M.blocks[b]; ++i) v[M.block_start(b) + i] = Rational(-1, M.blocks[b]);
  return v;
}

RootDatum simple_roots_coroots(const ParabolicDatum& P) {
  const auto& M = P.levi;
  const int k = M.num_blocks();
  const int n = M.rank();
  RootDatum rd;
  for (int pos = 0; pos + 1 < k; ++pos) {
    auto v = block_pair_root(M, P.block_order[pos], P.block_order[pos + 1]);
    rd.simple_roots.push_back(v);
    rd.simple_coroots.push_back(v);  // projection of e_i - e_j, see header
  }
  // Dual weights: varpi in a_M (block-constant), traceless, <varpi_i, a_j^vee> = delta_ij.
  // Unknowns: one value per block; equations: k-1 pairings + trace = 0.
  for (int i = 0; i + 1 < k; ++i) {
    RationalMat A(k, RationalVec(k, Rational(0)));
    RationalVec b(k, Rational(0));
    for (int j = 0; j + 1 < k; ++j) {
      // pairing of block-constant vector c with coroot j:
      // <c, coroot_j> = c_{bo[j]} - c_{bo[j+1]}  (coroot has 1/n_a resp -1/n_b,
      // block sums give c_a * n_a * 1/n_a = c_a)
      A[j][P.block_order[j]] += Rational(1);
      A[j][P.block_order[j + 1]] -= Rational(1);
      b[j] = (i == j) ? Rational(1) : Rational(0);
    }
    for (int bidx = 0; bidx < k; ++bidx) A[k - 1][bidx] = Rational(M.blocks[bidx]);
    b[k - 1] = Rational(0);
    RationalVec c = solve(A, b);
    RationalVec w(n, Rational(0));
    for (int bidx = 0; bidx < k; ++bidx)
      for (int t = 0; t < M.blocks[bidx]; ++t) w[M.block_start(bidx) + t] = c[bidx];
    rd.dual_weights.push_back(std::move(w));
  }
  return rd;
}

std::pair<bool, bool> tau_and_hat_tau(const ParabolicDatum& P, const RationalVec& X) {
  auto rd = simple_roots_coroots(P);
  bool tau = true, hat = true;
  for (const auto& a : rd.simple_roots)
    if (!(dot(a, X) > Rational(0))) tau = false;
  for (const auto& w : rd.dual_weights)
    if (!(dot(w, X) > Rational(0))) hat = false;
  return {tau, hat};
}

std::optional<RationalVec> adjacency(const ParabolicDatum& P, const ParabolicDatum& Q) {
  if (!(P.levi == Q.levi)) throw std::invalid_argument("adjacency: parabolics have different Levi");
  const int k = P.levi.num_blocks();
  std::vector<int> posP(k), posQ(k);
  for (int i = 0; i < k; ++i) {
    posP[P.block_order[i]] = i;
    posQ[Q.block_order[i]] = i;
  }
  std::optional<std::pair<int, int>> found;
  int count = 0;
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      if (a == b) continue;
      if (posP[a] < posP[b] && posQ[a] > posQ[b]) {
        ++count;
        found = {a, b};
      }
    }
  }
  if (count == 1) return block_pair_root(P.levi, found->first, found->second);
  return std::nullopt;
}

Rational covolume_squared(const ParabolicDatum& P) {
  auto rd = simple_roots_coroots(P);
  const std::size_t m = rd.simple_coroots.size();
  if (m == 0) return Rational(1);
  RationalMat G(m, RationalVec(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      G[i][j] = dot(rd.simple_coroots[i], rd.simple_coroots[j]);
  return determinant(G);
}

double theta_P(const ParabolicDatum& P, const RationalVec& lambda) {
  auto rd = simple_roots_coroots(P);
  Rational prod(1);
  for (const auto& cv : rd.simple_coroots) prod *= dot(lambda, cv);
  return to_double(prod) / std::sqrt(to_double(covolume_squared(P)));
}

}  // namespace torsionlab::roots
