#pragma once

#include <cstdint>
#include <vector>

#include "bbcpop/polynomial.hpp"

namespace bbcpop {

/// Symmetric 0/1 structure over the variables; diagonal is always one.
struct SparsityPattern {
  int n = 0;
  std::vector<std::vector<char>> adj;

  static SparsityPattern diagonal(int n);
  bool edge(int i, int j) const { return adj[static_cast<size_t>(i)][static_cast<size_t>(j)] != 0; }
  void set_edge(int i, int j);
};

/// Family of index sets V^k whose squares cover the nonzeros of the pattern.
struct CliqueCover {
  std::vector<std::vector<int>> cliques;  // each sorted ascending

  size_t size() const { return cliques.size(); }
};

/// Sparsity pattern of a POP: Hessian structure of the objective plus joint
/// membership in a complementarity set.
SparsityPattern build_pattern(const Polynomial& f, const ComplementarityFamily& comp);

/// Maximal cliques of a chordal extension, computed by symbolic Cholesky with
/// a minimum-degree ordering (ties broken by smallest index). Non-maximal and
/// duplicate cliques are dropped.
CliqueCover chordal_extend_and_cliques(const SparsityPattern& p);

/// The trivial single-clique cover V^1 = {0..n-1}.
CliqueCover dense_cover(int n);

/// Arrow-type cliques: band blocks of width a overlapping by b, all joined to
/// a shared tail block of width c. Implied n = (ell-1)(a-b) + a + c.
CliqueCover arrow_cliques(int a, int b, int c, int ell);
int arrow_variable_count(int a, int b, int c, int ell);

/// Unit-disk graph on n seeded-uniform points in the unit square.
SparsityPattern chordal_random_pattern(int n, double radio_range, uint64_t seed);

/// Pattern induced by a cover: R_ij = 1 iff i,j share a clique.
SparsityPattern pattern_from_cover(const CliqueCover& cover, int n);

/// Checks the cover condition: every R_ij = 1 lies inside some V^k x V^k.
bool covers(const CliqueCover& cover, const SparsityPattern& p);

}  // namespace bbcpop
