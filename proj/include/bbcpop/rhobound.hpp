#pragma once

#include <utility>
#include <vector>

#include "bbcpop/polynomial.hpp"
#include "bbcpop/relaxation.hpp"

namespace bbcpop {

/// Combinatorial data behind the trace bound: the filtered bases
/// B^k = {alpha in A^k : alpha does not dominate any gamma}, the per-variable
/// element sets E_i = {(k, alpha) : alpha in B^k, alpha_i >= 1} and the
/// per-variable indicator sets F_i = {gamma : gamma_i >= 1}.
struct TraceBoundProblem {
  int n = 0;
  std::vector<std::vector<ExponentVec>> B_k;
  std::vector<std::vector<std::pair<int, int>>> E;  // per variable: (block, element) pairs
  std::vector<std::vector<int>> F;                  // per variable: gamma indices
  std::vector<ExponentVec> gammas;
};

TraceBoundProblem make_trace_bound_problem(const std::vector<MomentBasis>& bases,
                                           const std::vector<ExponentVec>& gammas, int n);

/// Trace bound by counting: sum over blocks of |B^k|.
double trivial_rho(const std::vector<MomentBasis>& bases, const std::vector<ExponentVec>& gammas);

/// Tighter trace bound sum |B^k| - cbar, where cbar is a certified lower
/// bound on the number of basis elements any feasible binary point must zero
/// out. Always between the exact maximum trace and trivial_rho.
double submodular_rho(const TraceBoundProblem& problem);

}  // namespace bbcpop
