#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace bbcpop {

/// Exponent vector of a monomial; entry i is the power of variable i.
using ExponentVec = std::vector<int>;

int total_degree(const ExponentVec& a);
int max_degree(const ExponentVec& a);

/// Graded-lexicographic order: lower total degree first; ties broken so that
/// e_0 < e_1 < ... (the vector that is lexicographically larger comes first).
struct GrlexLess {
  bool operator()(const ExponentVec& a, const ExponentVec& b) const {
    const int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return a > b;
  }
};

/// Partition of the variable set into binary and box indices.
struct IndexPartition {
  int n = 0;
  std::vector<char> is_bin;  // size n

  static IndexPartition all_binary(int n);
  static IndexPartition all_box(int n);
  static IndexPartition from_bin_set(int n, const std::vector<int>& bin);

  bool binary(int i) const { return is_bin[static_cast<size_t>(i)] != 0; }
  std::vector<int> bin_indices() const;
  std::vector<int> box_indices() const;
};

/// Family of complementarity sets C: prod_{j in C} x_j = 0.
struct ComplementarityFamily {
  std::vector<std::vector<int>> sets;

  bool empty() const { return sets.empty(); }
  /// 0/1 indicator vectors of the sets (the family Gamma).
  std::vector<ExponentVec> gammas(int n) const;
};

/// Caps binary exponents at one; box exponents pass through.
ExponentVec reduce_exponent(const ExponentVec& alpha, const IndexPartition& part);

/// r(c * alpha) for an integer scale c >= 1.
ExponentVec scaled_reduce(const ExponentVec& alpha, int c, const IndexPartition& part);

/// Componentwise alpha >= gamma.
bool dominates(const ExponentVec& alpha, const ExponentVec& gamma);

/// Sparse multivariate polynomial in minimal representation: no stored
/// coefficient is zero, exponent vectors are unique keys.
class Polynomial {
 public:
  using TermMap = std::map<ExponentVec, double, GrlexLess>;

  explicit Polynomial(int n) : n_(n) {}

  int dim() const { return n_; }
  const TermMap& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add_term(const ExponentVec& alpha, double c);
  double coeff(const ExponentVec& alpha) const;
  double constant_term() const;

  double eval(const std::vector<double>& x) const;

  /// deg f with deg(x^alpha) = max_i alpha_i.
  int max_exponent_degree() const;
  /// max over the support of sum_i alpha_i.
  int max_total_degree() const;

 private:
  int n_;
  TermMap terms_;
};

/// Replaces every exponent key by r(alpha), summing collapsing coefficients
/// and dropping terms that cancel to zero.
Polynomial canonicalize_objective(const Polynomial& f, const IndexPartition& part);

}  // namespace bbcpop
