#include "bbcpop/relaxation.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "bbcpop/instances.hpp"
#include "bbcpop/rhobound.hpp"

namespace bbcpop {

namespace {

struct VecHash {
  size_t operator()(const ExponentVec& v) const {
    size_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= static_cast<size_t>(x) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

void enumerate_basis(const std::vector<int>& clique, size_t pos, int budget, ExponentVec& cur,
                     std::vector<ExponentVec>& out) {
  if (pos == clique.size()) {
    out.push_back(cur);
    return;
  }
  const int var = clique[pos];
  for (int e = 0; e <= budget; ++e) {
    cur[static_cast<size_t>(var)] = e;
    enumerate_basis(clique, pos + 1, budget - e, cur, out);
  }
  cur[static_cast<size_t>(var)] = 0;
}

}  // namespace

std::vector<MomentBasis> build_bases(const CliqueCover& cover, int n, int omega) {
  if (omega < 1) throw std::invalid_argument("relaxation order must be >= 1");
  std::vector<MomentBasis> bases;
  bases.reserve(cover.size());
  for (const auto& clique : cover.cliques) {
    MomentBasis basis;
    basis.clique = clique;
    basis.omega = omega;
    ExponentVec cur(static_cast<size_t>(n), 0);
    enumerate_basis(clique, 0, omega, cur, basis.elems);
    std::sort(basis.elems.begin(), basis.elems.end(), GrlexLess{});
    bases.push_back(std::move(basis));
  }
  return bases;
}

void verify_coverage(const CliqueCover& cover, int omega, const Polynomial& f0,
                     const std::vector<ExponentVec>& gammas) {
  auto covered = [&](const ExponentVec& alpha) {
    if (total_degree(alpha) > 2 * omega) return false;
    for (const auto& clique : cover.cliques) {
      bool inside = true;
      for (int i = 0; i < static_cast<int>(alpha.size()) && inside; ++i)
        if (alpha[static_cast<size_t>(i)] >= 1 &&
            !std::binary_search(clique.begin(), clique.end(), i))
          inside = false;
      if (inside) return true;
    }
    return false;
  };
  for (const auto& [alpha, c] : f0.terms())
    if (!covered(alpha))
      throw CoverageError("objective monomial not covered by the clique cover at this order");
  for (const auto& g : gammas)
    if (!covered(g))
      throw CoverageError("complementarity indicator not covered by the clique cover at this order");
}

BlockSymMatrix lift_objective(const Polynomial& f, const std::vector<MomentBasis>& bases,
                              const IndexPartition& part) {
  BlockSymMatrix F0;
  for (const auto& b : bases) F0.blocks.emplace_back(Eigen::MatrixXd::Zero(b.size(), b.size()));

  // Per block: reduced key -> graded-lex-first entry realizing it.
  std::vector<std::unordered_map<ExponentVec, std::pair<int, int>, VecHash>> first_entry(bases.size());
  for (size_t k = 0; k < bases.size(); ++k) {
    const auto& e = bases[k].elems;
    for (int i = 0; i < static_cast<int>(e.size()); ++i)
      for (int j = i; j < static_cast<int>(e.size()); ++j) {
        ExponentVec sum(e[static_cast<size_t>(i)]);
        for (size_t t = 0; t < sum.size(); ++t) sum[t] += e[static_cast<size_t>(j)][t];
        first_entry[k].emplace(reduce_exponent(sum, part), std::make_pair(i, j));
      }
  }

  for (const auto& [alpha, c] : f.terms()) {
    const ExponentVec key = reduce_exponent(alpha, part);
    bool placed = false;
    for (size_t k = 0; k < bases.size() && !placed; ++k) {
      auto it = first_entry[k].find(key);
      if (it == first_entry[k].end()) continue;
      const auto [i, j] = it->second;
      if (i == j) {
        F0.blocks[k](i, i) += c;
      } else {
        F0.blocks[k](i, j) += c * 0.5;
        F0.blocks[k](j, i) += c * 0.5;
      }
      placed = true;
    }
    if (!placed) throw CoverageError("monomial not representable in any moment basis");
  }
  return F0;
}

K2Structure build_k2(const std::vector<MomentBasis>& bases, const IndexPartition& part,
                     const ComplementarityFamily& comp) {
  K2Structure k2;
  const auto gammas = comp.gammas(part.n);
  std::unordered_map<ExponentVec, int, VecHash> registry;

  int omega_max = 1;
  for (const auto& b : bases) omega_max = std::max(omega_max, b.omega);

  for (const auto& basis : bases) {
    const auto& e = basis.elems;
    Eigen::MatrixXi ids(e.size(), e.size());
    for (int i = 0; i < static_cast<int>(e.size()); ++i)
      for (int j = i; j < static_cast<int>(e.size()); ++j) {
        ExponentVec sum(e[static_cast<size_t>(i)]);
        for (size_t t = 0; t < sum.size(); ++t) sum[t] += e[static_cast<size_t>(j)][t];
        const ExponentVec key = reduce_exponent(sum, part);
        auto [it, inserted] = registry.emplace(key, k2.num_classes());
        if (inserted) {
          K2Structure::ClassInfo info;
          info.key = key;
          for (const auto& g : gammas)
            if (dominates(key, g)) {
              info.zero = true;
              break;
            }
          k2.classes.push_back(std::move(info));
        }
        const int id = it->second;
        k2.classes[static_cast<size_t>(id)].weight += (i == j) ? 1.0 : 2.0;
        ids(i, j) = id;
        ids(j, i) = id;
      }
    k2.entry_class.push_back(std::move(ids));
  }

  // Scaling inequalities: value(delta) >= value(r(c*delta)) on [0,1]^box.
  std::set<std::pair<int, int>> edges;
  for (int id = 0; id < k2.num_classes(); ++id) {
    const auto& cls = k2.classes[static_cast<size_t>(id)];
    if (cls.zero) continue;
    bool has_box = false;
    for (int i = 0; i < part.n && !has_box; ++i)
      if (!part.binary(i) && cls.key[static_cast<size_t>(i)] >= 1) has_box = true;
    if (!has_box) continue;
    for (int c = 2; c <= 2 * omega_max; ++c) {
      const ExponentVec scaled = scaled_reduce(cls.key, c, part);
      auto it = registry.find(scaled);
      if (it == registry.end()) continue;
      const int to = it->second;
      if (to == id || k2.classes[static_cast<size_t>(to)].zero) continue;
      edges.emplace(id, to);
    }
  }

  // Transitive reduction: drop (u,v) when v is reachable from u via a longer path.
  std::unordered_map<int, std::vector<int>> adj;
  for (const auto& [u, v] : edges) adj[u].push_back(v);
  auto reachable = [&](int from, int to, int skip_direct_from) {
    std::vector<int> stack{from};
    std::set<int> seen{from};
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      auto it = adj.find(u);
      if (it == adj.end()) continue;
      for (int w : it->second) {
        if (u == skip_direct_from && w == to) continue;
        if (w == to) return true;
        if (seen.insert(w).second) stack.push_back(w);
      }
    }
    return false;
  };
  for (const auto& [u, v] : edges)
    if (!reachable(u, v, u)) k2.chain_edges.emplace_back(u, v);

  return k2;
}

BlockSymMatrix DnnCop::dual_matrix(double y0) const {
  BlockSymMatrix g = F0;
  const double shift = y0 / static_cast<double>(ell());
  for (auto& b : g.blocks) b(0, 0) -= shift;
  return g;
}

DnnCop assemble(const PopInstance& pop, const AssembleOptions& opts) {
  DnnCop cop;
  cop.part = pop.part;
  const Polynomial f0 = canonicalize_objective(pop.f0, pop.part);
  cop.gammas = pop.comp.gammas(pop.part.n);

  int d = f0.max_total_degree();
  for (const auto& g : cop.gammas) d = std::max(d, total_degree(g));
  d = std::max(d, 1);
  cop.omega = opts.omega > 0 ? opts.omega : (d + 1) / 2;

  CliqueCover cover;
  if (opts.dense) {
    cover = dense_cover(pop.part.n);
  } else {
    cover = chordal_extend_and_cliques(build_pattern(f0, pop.comp));
  }
  verify_coverage(cover, cop.omega, f0, cop.gammas);

  cop.bases = build_bases(cover, pop.part.n, cop.omega);
  cop.F0 = lift_objective(f0, cop.bases, pop.part);
  cop.k2 = build_k2(cop.bases, pop.part, pop.comp);
  if (opts.rho_mode == RhoMode::Submodular) {
    cop.rho = submodular_rho(make_trace_bound_problem(cop.bases, cop.gammas, pop.part.n));
  } else {
    cop.rho = trivial_rho(cop.bases, cop.gammas);
  }
  return cop;
}

BlockSymMatrix moment_tuple(const std::vector<MomentBasis>& bases, const std::vector<double>& x) {
  BlockSymMatrix z;
  for (const auto& basis : bases) {
    Eigen::VectorXd mono(basis.size());
    for (int i = 0; i < basis.size(); ++i) {
      double v = 1.0;
      const auto& alpha = basis.elems[static_cast<size_t>(i)];
      for (size_t t = 0; t < alpha.size(); ++t)
        for (int p = 0; p < alpha[t]; ++p) v *= x[t];
      mono(i) = v;
    }
    z.blocks.emplace_back(mono * mono.transpose());
  }
  return z;
}

}  // namespace bbcpop
