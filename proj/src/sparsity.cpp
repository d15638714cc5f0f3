#include "bbcpop/sparsity.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace bbcpop {

SparsityPattern SparsityPattern::diagonal(int n) {
  SparsityPattern p;
  p.n = n;
  p.adj.assign(static_cast<size_t>(n), std::vector<char>(static_cast<size_t>(n), 0));
  for (int i = 0; i < n; ++i) p.adj[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
  return p;
}

void SparsityPattern::set_edge(int i, int j) {
  adj[static_cast<size_t>(i)][static_cast<size_t>(j)] = 1;
  adj[static_cast<size_t>(j)][static_cast<size_t>(i)] = 1;
}

SparsityPattern build_pattern(const Polynomial& f, const ComplementarityFamily& comp) {
  SparsityPattern p = SparsityPattern::diagonal(f.dim());
  for (const auto& [alpha, c] : f.terms()) {
    std::vector<int> support;
    for (int i = 0; i < f.dim(); ++i)
      if (alpha[static_cast<size_t>(i)] >= 1) support.push_back(i);
    for (size_t a = 0; a < support.size(); ++a)
      for (size_t b = a + 1; b < support.size(); ++b) p.set_edge(support[a], support[b]);
  }
  for (const auto& set : comp.sets)
    for (size_t a = 0; a < set.size(); ++a)
      for (size_t b = a + 1; b < set.size(); ++b) p.set_edge(set[a], set[b]);
  return p;
}

CliqueCover dense_cover(int n) {
  CliqueCover cover;
  std::vector<int> all(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<size_t>(i)] = i;
  cover.cliques.push_back(std::move(all));
  return cover;
}

CliqueCover chordal_extend_and_cliques(const SparsityPattern& p) {
  const int n = p.n;
  std::vector<std::set<int>> nb(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && p.edge(i, j)) nb[static_cast<size_t>(i)].insert(j);

  // Elimination game with a greedy minimum-degree ordering; each eliminated
  // vertex together with its remaining neighborhood is a clique candidate.
  std::vector<char> eliminated(static_cast<size_t>(n), 0);
  std::vector<std::vector<int>> candidates;
  for (int step = 0; step < n; ++step) {
    int v = -1;
    size_t best = static_cast<size_t>(n) + 1;
    for (int i = 0; i < n; ++i) {
      if (eliminated[static_cast<size_t>(i)]) continue;
      if (nb[static_cast<size_t>(i)].size() < best) {
        best = nb[static_cast<size_t>(i)].size();
        v = i;
      }
    }
    std::vector<int> clique(nb[static_cast<size_t>(v)].begin(), nb[static_cast<size_t>(v)].end());
    clique.push_back(v);
    std::sort(clique.begin(), clique.end());
    candidates.push_back(std::move(clique));

    const auto neigh = nb[static_cast<size_t>(v)];
    for (int a : neigh) {
      nb[static_cast<size_t>(a)].erase(v);
      for (int b : neigh)
        if (a != b) nb[static_cast<size_t>(a)].insert(b);
    }
    nb[static_cast<size_t>(v)].clear();
    eliminated[static_cast<size_t>(v)] = 1;
  }

  // Drop duplicates and cliques contained in another.
  CliqueCover cover;
  for (size_t i = 0; i < candidates.size(); ++i) {
    bool contained = false;
    for (size_t j = 0; j < candidates.size() && !contained; ++j) {
      if (i == j) continue;
      const auto& a = candidates[i];
      const auto& b = candidates[j];
      if (a.size() > b.size()) continue;
      if (a.size() == b.size() && i < j) continue;  // keep first of identical pair
      contained = std::includes(b.begin(), b.end(), a.begin(), a.end());
    }
    if (!contained) cover.cliques.push_back(candidates[i]);
  }
  return cover;
}

int arrow_variable_count(int a, int b, int c, int ell) {
  return (ell - 1) * (a - b) + a + c;
}

CliqueCover arrow_cliques(int a, int b, int c, int ell) {
  if (ell < 2 || a < 2 || b < 0 || b > a - 1 || c < 1)
    throw std::invalid_argument("arrow parameters out of range");
  const int n = arrow_variable_count(a, b, c, ell);
  CliqueCover cover;
  for (int k = 0; k < ell; ++k) {
    std::vector<int> v;
    const int off = k * (a - b);
    for (int i = 0; i < a; ++i) v.push_back(off + i);
    for (int i = 0; i < c; ++i) v.push_back(n - c + i);
    cover.cliques.push_back(std::move(v));
  }
  return cover;
}

SparsityPattern chordal_random_pattern(int n, double radio_range, uint64_t seed) {
  if (n < 1 || radio_range <= 0.0)
    throw std::invalid_argument("invalid random pattern parameters");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> px(static_cast<size_t>(n)), py(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    px[static_cast<size_t>(i)] = uni(rng);
    py[static_cast<size_t>(i)] = uni(rng);
  }
  SparsityPattern p = SparsityPattern::diagonal(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double dx = px[static_cast<size_t>(i)] - px[static_cast<size_t>(j)];
      const double dy = py[static_cast<size_t>(i)] - py[static_cast<size_t>(j)];
      if (std::sqrt(dx * dx + dy * dy) <= radio_range) p.set_edge(i, j);
    }
  return p;
}

SparsityPattern pattern_from_cover(const CliqueCover& cover, int n) {
  SparsityPattern p = SparsityPattern::diagonal(n);
  for (const auto& v : cover.cliques)
    for (size_t a = 0; a < v.size(); ++a)
      for (size_t b = a + 1; b < v.size(); ++b) p.set_edge(v[a], v[b]);
  return p;
}

bool covers(const CliqueCover& cover, const SparsityPattern& p) {
  for (int i = 0; i < p.n; ++i)
    for (int j = i + 1; j < p.n; ++j) {
      if (!p.edge(i, j)) continue;
      bool found = false;
      for (const auto& v : cover.cliques) {
        if (std::binary_search(v.begin(), v.end(), i) &&
            std::binary_search(v.begin(), v.end(), j)) {
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
  return true;
}

}  // namespace bbcpop
