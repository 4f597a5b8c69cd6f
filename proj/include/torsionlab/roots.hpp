#ifndef TORSIONLAB_ROOTS_HPP
#define TORSIONLAB_ROOTS_HPP

#include <optional>
#include <vector>

#include "torsionlab/rational_linalg.hpp"

// Exact combinatorics of standard Levi subgroups, parabolic subgroups and
// their (co)root data for GL(n) and SL(n), over the diagonal split torus.
//
// Conventions (fixed once and for all):
//  * All inner products on the diagonal Cartan use the trace form
//    <X,Y> = sum_i x_i y_i.  Linear functionals are represented by their
//    trace-form representing vectors, so every root, coroot and weight below
//    is an n-vector of rationals.
//  * A root beta of A_M attached to the ordered block pair (a,b) is the
//    functional X -> X_a - X_b on block-constant vectors.  Its representing
//    vector has entries 1/n_a on block a and -1/n_b on block b.  The coroot
//    beta^vee is the orthogonal projection of e_i - e_j (i in block a, j in
//    block b) onto the block-constant subspace, which is the same vector.
//  * v_P is the covolume of the lattice spanned by the simple coroots,
//    computed as sqrt(det Gram) in the trace form.

namespace torsionlab::roots {

enum class GroupKind { GL, SL };

// A standard Levi subgroup: ordered block sizes summing to n.
struct LeviComposition {
  std::vector<int> blocks;
  GroupKind kind = GroupKind::GL;

  int rank() const {
    int n = 0;
    for (int b : blocks) n += b;
    return n;
  }
  int num_blocks() const { return static_cast<int>(blocks.size()); }
  // first coordinate index of block b (0-based)
  int block_start(int b) const {
    int s = 0;
    for (int i = 0; i < b; ++i) s += blocks[i];
    return s;
  }
  bool operator==(const LeviComposition& o) const {
    return blocks == o.blocks && kind == o.kind;
  }
};

// P in P(M): the Levi M together with an ordering of its blocks.
// block_order[pos] = index of the block sitting at position pos, counting
// from the "top" of the block triangular shape.
struct ParabolicDatum {
  LeviComposition levi;
  std::vector<int> block_order;

  bool operator==(const ParabolicDatum& o) const {
    return levi == o.levi && block_order == o.block_order;
  }
};

// A Levi containing M, as a set partition of M's blocks.  Parts are listed
// with elements ascending and parts ordered by smallest element (canonical
// labeling).
struct SetPartition {
  std::vector<std::vector<int>> parts;
  bool operator==(const SetPartition& o) const { return parts == o.parts; }
};

struct RootDatum {
  std::vector<RationalVec> simple_roots;    // Delta_P, representing vectors
  std::vector<RationalVec> simple_coroots;  // Delta_P^vee
  std::vector<RationalVec> dual_weights;    // varpi_i, traceless, <w_i,a_j^vee>=d_ij
};

// All 2^(n-1) compositions of n; throws std::invalid_argument if n < 2.
std::vector<LeviComposition> enumerate_levis(int n, GroupKind kind);

// The (#blocks)! elements of P(M).
std::vector<ParabolicDatum> parabolics_containing(const LeviComposition& M);

// L(M): all set partitions of M's blocks (Bell(#blocks) of them).
std::vector<SetPartition> levis_containing(const LeviComposition& M);

// |F(M)| = sum over L in L(M) of (#parts)!.
long long count_parabolics_with_levi_containing(const LeviComposition& M);

RootDatum simple_roots_coroots(const ParabolicDatum& P);

// Representing vector of the root attached to ordered block pair (a, b).
RationalVec block_pair_root(const LeviComposition& M, int a, int b);

// tau_P(X) and hat-tau_P(X); X has n rational coordinates, strict inequalities.
std::pair<bool, bool> tau_and_hat_tau(const ParabolicDatum& P, const RationalVec& X);

// Unique root in Sigma_P cap -Sigma_Q when P and Q are adjacent; throws on
// Levi mismatch; empty when not adjacent (or P == Q).
std::optional<RationalVec> adjacency(const ParabolicDatum& P, const ParabolicDatum& Q);

// v_P^2 = det Gram(simple coroots), exact.
Rational covolume_squared(const ParabolicDatum& P);

// theta_P(lambda) = v_P^{-1} prod_{alpha in Delta_P} lambda(alpha^vee).
double theta_P(const ParabolicDatum& P, const RationalVec& lambda);

}  // namespace torsionlab::roots

#endif
