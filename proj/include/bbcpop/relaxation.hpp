#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "bbcpop/block_matrix.hpp"
#include "bbcpop/polynomial.hpp"
#include "bbcpop/sparsity.hpp"

namespace bbcpop {

/// Raised when a clique cover cannot represent some monomial of the objective
/// (or some complementarity indicator) at the chosen relaxation order.
struct CoverageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Monomial basis of one clique: all exponent vectors supported on the clique
/// with total degree at most omega, sorted graded-lex (zero vector first).
struct MomentBasis {
  std::vector<int> clique;  // sorted variable indices
  int omega = 0;
  std::vector<ExponentVec> elems;

  int size() const { return static_cast<int>(elems.size()); }
};

/// Description of the polyhedral cone K2 over the block entries:
/// entries sharing a reduced key r(alpha+beta) are equal, entries whose key
/// dominates some gamma are zero, all entries are nonnegative, and
/// chain edges enforce value(from) >= value(to) for keys related by scaling.
struct K2Structure {
  struct ClassInfo {
    ExponentVec key;
    double weight = 0.0;  // scalar entry count (off-diagonal entries count twice)
    bool zero = false;
  };

  std::vector<ClassInfo> classes;
  std::vector<Eigen::MatrixXi> entry_class;       // per block: class id of each entry
  std::vector<std::pair<int, int>> chain_edges;   // (from, to): value(from) >= value(to)

  int num_classes() const { return static_cast<int>(classes.size()); }
  std::vector<int> block_sizes() const {
    std::vector<int> s;
    s.reserve(entry_class.size());
    for (const auto& m : entry_class) s.push_back(static_cast<int>(m.rows()));
    return s;
  }
};

std::vector<MomentBasis> build_bases(const CliqueCover& cover, int n, int omega);

/// Coverage condition: every monomial of f0 and every gamma fits inside some
/// clique with total degree <= 2*omega. Throws CoverageError otherwise.
void verify_coverage(const CliqueCover& cover, int omega, const Polynomial& f0,
                     const std::vector<ExponentVec>& gammas);

/// Lifts the objective: each monomial is placed in the lowest-index covering
/// clique at the graded-lex-first entry realizing it, split symmetrically.
BlockSymMatrix lift_objective(const Polynomial& f, const std::vector<MomentBasis>& bases,
                              const IndexPartition& part);

K2Structure build_k2(const std::vector<MomentBasis>& bases, const IndexPartition& part,
                     const ComplementarityFamily& comp);

/// Fully assembled DNN relaxation: min <F0,Z> s.t. <H0,Z> = 1, Z in K1 ^ K2,
/// with the trace bound rho for bound certification.
struct DnnCop {
  std::vector<MomentBasis> bases;
  BlockSymMatrix F0;
  K2Structure k2;
  double rho = 0.0;
  IndexPartition part;
  std::vector<ExponentVec> gammas;
  int omega = 0;

  int ell() const { return static_cast<int>(bases.size()); }
  std::vector<int> block_sizes() const {
    std::vector<int> s;
    s.reserve(bases.size());
    for (const auto& b : bases) s.push_back(b.size());
    return s;
  }
  /// G(y0) = F0 - y0*H0, with (H0^k)_{00} = 1/ell.
  BlockSymMatrix dual_matrix(double y0) const;
};

struct PopInstance;  // instances.hpp

enum class RhoMode { Trivial, Submodular };

struct AssembleOptions {
  int omega = -1;  // -1: default ceil(d/2) with d the max total degree
  bool dense = false;
  RhoMode rho_mode = RhoMode::Trivial;
};

DnnCop assemble(const PopInstance& pop, const AssembleOptions& opts = {});

/// Moment tuple of a point x: blocks x^{A^k x A^k}. Test/diagnostic helper.
BlockSymMatrix moment_tuple(const std::vector<MomentBasis>& bases, const std::vector<double>& x);

}  // namespace bbcpop
