#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bbcpop/polynomial.hpp"
#include "bbcpop/sparsity.hpp"

namespace bbcpop {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PopInstance {
  Polynomial f0{0};
  IndexPartition part;
  ComplementarityFamily comp;
  std::string provenance;
};

struct QapInstance {
  int r = 0;
  Eigen::MatrixXd A, B;
};

/// Random POP on a clique cover: the support is every monomial of total degree
/// <= d inside a single clique, coefficients uniform on [-1,1]; comp_count
/// complementarity pairs are drawn within cliques (diagonal pairs excluded).
/// Deterministic per seed (std::mt19937_64).
PopInstance gen_random_pop(const CliqueCover& cover, int d, const IndexPartition& part,
                           int comp_count, uint64_t seed);

/// QAPLIB text format: size r, then two r x r matrices, whitespace-separated.
QapInstance load_qaplib(const std::string& path);
QapInstance parse_qaplib(std::istream& in, const std::string& name);

/// Penalized box-complementarity POP for min <X, A X B^T> over permutation
/// matrices: objective x^T(B (x) A)x plus a scaled squared penalty on the
/// row/column sum constraints; one complementarity pair per two distinct
/// positions in the same row or the same column.
PopInstance qap_to_pop(const QapInstance& q, double lambda = 1e5);

/// Spectral norm by power iteration on M^T M (relative tolerance 1e-10).
double spectral_norm(const Eigen::MatrixXd& m);

struct BruteForceResult {
  double value = 0.0;
  std::vector<double> argmin;
  bool exact = false;  // true when there are no box variables
};

/// Exhaustive minimum over binary assignments x a uniform grid on the box
/// coordinates, honoring complementarity. Exact for pure-binary instances;
/// otherwise an upper bound on the optimum.
BruteForceResult brute_force_optimum(const PopInstance& pop, int grid_per_box = 2);

/// Objective value at a greedily improved feasible point (upper bound on the
/// optimum; a valid starting upper bracket for the bisection).
std::pair<double, std::vector<double>> heuristic_upper_bound(const PopInstance& pop);

/// JSON form {n, objective: [{expo, coef}], bin, box, comp, provenance?},
/// all indices zero-based.
std::string pop_to_json(const PopInstance& pop);
PopInstance pop_from_json(const std::string& text);
PopInstance load_instance(const std::string& path);
void save_instance(const PopInstance& pop, const std::string& path);

}  // namespace bbcpop
