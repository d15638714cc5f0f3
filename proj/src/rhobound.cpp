#include "bbcpop/rhobound.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace bbcpop {

namespace {

std::vector<std::vector<ExponentVec>> filter_bases(const std::vector<MomentBasis>& bases,
                                                   const std::vector<ExponentVec>& gammas) {
  std::vector<std::vector<ExponentVec>> B;
  B.reserve(bases.size());
  for (const auto& basis : bases) {
    std::vector<ExponentVec> kept;
    for (const auto& alpha : basis.elems) {
      bool dead = false;
      for (const auto& g : gammas)
        if (dominates(alpha, g)) {
          dead = true;
          break;
        }
      if (!dead) kept.push_back(alpha);
    }
    B.push_back(std::move(kept));
  }
  return B;
}

/// Lower bound on the covering cost for one processing order of the gammas:
/// each gamma is charged the cheapest E_i (restricted to still-uncharged
/// elements) among the variables in its support; elements of every E_i in the
/// support are then retired so no element is charged twice.
double greedy_charge_bound(const TraceBoundProblem& p, const std::vector<int>& order) {
  std::set<std::pair<int, int>> used;
  double total = 0.0;
  for (int g : order) {
    const auto& gamma = p.gammas[static_cast<size_t>(g)];
    long best = -1;
    for (int i = 0; i < p.n; ++i) {
      if (gamma[static_cast<size_t>(i)] < 1) continue;
      long fresh = 0;
      for (const auto& e : p.E[static_cast<size_t>(i)])
        if (!used.count(e)) ++fresh;
      if (best < 0 || fresh < best) best = fresh;
    }
    if (best < 0) throw std::runtime_error("complementarity indicator with empty support");
    total += static_cast<double>(best);
    for (int i = 0; i < p.n; ++i)
      if (gamma[static_cast<size_t>(i)] >= 1)
        for (const auto& e : p.E[static_cast<size_t>(i)]) used.insert(e);
  }
  return total;
}

/// Lower bound on the covering cost from vertex-disjoint cliques of the
/// pairwise-complementarity graph.  If every pair of variables inside a set Q
/// is a complementarity condition, a feasible 0/1 point keeps at most one
/// variable of Q nonzero, so the zero set contains all of Q but one vertex.
/// Counting only basis elements supported inside Q keeps the contributions of
/// vertex-disjoint cliques disjoint, so their costs add up.
double clique_partition_bound(const TraceBoundProblem& p) {
  const size_t n = static_cast<size_t>(p.n);
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  bool any_edge = false;
  for (const auto& gamma : p.gammas) {
    std::vector<int> supp;
    for (int i = 0; i < p.n; ++i)
      if (gamma[static_cast<size_t>(i)] >= 1) supp.push_back(i);
    if (supp.size() == 2) {
      adj[static_cast<size_t>(supp[0])][static_cast<size_t>(supp[1])] = 1;
      adj[static_cast<size_t>(supp[1])][static_cast<size_t>(supp[0])] = 1;
      any_edge = true;
    }
  }
  if (!any_edge) return 0.0;

  std::vector<char> used(n, 0);
  double total = 0.0;
  for (int i = 0; i < p.n; ++i) {
    if (used[static_cast<size_t>(i)]) continue;
    std::vector<int> clique{i};
    for (int j = i + 1; j < p.n; ++j) {
      if (used[static_cast<size_t>(j)]) continue;
      bool all = true;
      for (int v : clique)
        if (!adj[static_cast<size_t>(v)][static_cast<size_t>(j)]) {
          all = false;
          break;
        }
      if (all) clique.push_back(j);
    }
    if (clique.size() < 2) continue;
    for (int v : clique) used[static_cast<size_t>(v)] = 1;

    // Distinct basis elements supported inside the clique; an element survives
    // a designated nonzero vertex v only when its whole support is {v}.
    std::set<std::pair<int, int>> elems;
    std::vector<long> only_v(clique.size(), 0);
    for (size_t k = 0; k < p.B_k.size(); ++k)
      for (size_t a = 0; a < p.B_k[k].size(); ++a) {
        const auto& alpha = p.B_k[k][a];
        std::vector<int> supp;
        for (int v = 0; v < p.n; ++v)
          if (alpha[static_cast<size_t>(v)] >= 1) supp.push_back(v);
        if (supp.empty()) continue;
        bool inside = true;
        for (int v : supp)
          if (std::find(clique.begin(), clique.end(), v) == clique.end()) {
            inside = false;
            break;
          }
        if (!inside) continue;
        elems.emplace(static_cast<int>(k), static_cast<int>(a));
        if (supp.size() == 1)
          for (size_t c = 0; c < clique.size(); ++c)
            if (clique[c] == supp[0]) ++only_v[c];
      }
    long best_survivors = 0;
    for (long cnt : only_v) best_survivors = std::max(best_survivors, cnt);
    total += static_cast<double>(static_cast<long>(elems.size()) - best_survivors);
  }
  return total;
}

}  // namespace

TraceBoundProblem make_trace_bound_problem(const std::vector<MomentBasis>& bases,
                                           const std::vector<ExponentVec>& gammas, int n) {
  TraceBoundProblem p;
  p.n = n;
  p.gammas = gammas;
  p.B_k = filter_bases(bases, gammas);
  p.E.assign(static_cast<size_t>(n), {});
  p.F.assign(static_cast<size_t>(n), {});
  for (size_t k = 0; k < p.B_k.size(); ++k)
    for (size_t a = 0; a < p.B_k[k].size(); ++a) {
      const auto& alpha = p.B_k[k][a];
      for (int i = 0; i < n; ++i)
        if (alpha[static_cast<size_t>(i)] >= 1)
          p.E[static_cast<size_t>(i)].emplace_back(static_cast<int>(k), static_cast<int>(a));
    }
  for (size_t g = 0; g < gammas.size(); ++g)
    for (int i = 0; i < n; ++i)
      if (gammas[g][static_cast<size_t>(i)] >= 1) p.F[static_cast<size_t>(i)].push_back(static_cast<int>(g));
  return p;
}

double trivial_rho(const std::vector<MomentBasis>& bases, const std::vector<ExponentVec>& gammas) {
  double rho = 0.0;
  for (const auto& B : filter_bases(bases, gammas)) rho += static_cast<double>(B.size());
  return rho;
}

double submodular_rho(const TraceBoundProblem& p) {
  double total = 0.0;
  for (const auto& B : p.B_k) total += static_cast<double>(B.size());
  if (p.gammas.empty()) return total;

  // Certified lower bound cbar on the cheapest covering cost: best single
  // gamma, and charge sums over two processing orders.
  double cbar = 0.0;
  for (const auto& gamma : p.gammas) {
    long best = -1;
    for (int i = 0; i < p.n; ++i) {
      if (gamma[static_cast<size_t>(i)] < 1) continue;
      const long sz = static_cast<long>(p.E[static_cast<size_t>(i)].size());
      if (best < 0 || sz < best) best = sz;
    }
    if (best < 0) throw std::runtime_error("complementarity indicator with empty support");
    cbar = std::max(cbar, static_cast<double>(best));
  }

  std::vector<int> order(p.gammas.size());
  for (size_t g = 0; g < order.size(); ++g) order[g] = static_cast<int>(g);
  cbar = std::max(cbar, greedy_charge_bound(p, order));
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    auto cheapest = [&](int g) {
      long best = -1;
      for (int i = 0; i < p.n; ++i) {
        if (p.gammas[static_cast<size_t>(g)][static_cast<size_t>(i)] < 1) continue;
        const long sz = static_cast<long>(p.E[static_cast<size_t>(i)].size());
        if (best < 0 || sz < best) best = sz;
      }
      return best;
    };
    return cheapest(a) > cheapest(b);
  });
  cbar = std::max(cbar, greedy_charge_bound(p, order));
  cbar = std::max(cbar, clique_partition_bound(p));

  return total - cbar;
}

}  // namespace bbcpop
