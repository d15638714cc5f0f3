#include "bbcpop/cones.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace bbcpop {

BlockSymMatrix project_psd_product(const BlockSymMatrix& z) {
  BlockSymMatrix out = z;
  for (auto& b : out.blocks) {
    const Eigen::MatrixXd sym = (b + b.transpose()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    b = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
  }
  return out;
}

double lambda_min(const BlockSymMatrix& z) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& b : z.blocks) {
    const Eigen::MatrixXd sym = (b + b.transpose()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
  }
  return lo;
}

Eigen::VectorXd collapse_to_classes(const BlockSymMatrix& z, const K2Structure& k2) {
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(k2.num_classes());
  for (size_t k = 0; k < z.blocks.size(); ++k) {
    const auto& b = z.blocks[k];
    const auto& ids = k2.entry_class[k];
    for (int i = 0; i < b.rows(); ++i) {
      sums(ids(i, i)) += b(i, i);
      for (int j = i + 1; j < b.cols(); ++j) sums(ids(i, j)) += b(i, j) + b(j, i);
    }
  }
  Eigen::VectorXd means(k2.num_classes());
  for (int c = 0; c < k2.num_classes(); ++c)
    means(c) = sums(c) / k2.classes[static_cast<size_t>(c)].weight;
  return means;
}

BlockSymMatrix expand_from_classes(const Eigen::VectorXd& values, const K2Structure& k2) {
  BlockSymMatrix z;
  z.blocks.reserve(k2.entry_class.size());
  for (const auto& ids : k2.entry_class) {
    Eigen::MatrixXd b(ids.rows(), ids.cols());
    for (int i = 0; i < ids.rows(); ++i)
      for (int j = 0; j < ids.cols(); ++j) b(i, j) = values(ids(i, j));
    z.blocks.push_back(std::move(b));
  }
  return z;
}

namespace {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(static_cast<size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent[static_cast<size_t>(find(a))] = find(b); }
};

/// Weighted pool-adjacent-violators fit of a nonincreasing sequence.
std::vector<double> pava_nonincreasing(const std::vector<double>& y, const std::vector<double>& w) {
  struct Block {
    double sum, weight;
    int count;
    double mean() const { return sum / weight; }
  };
  std::vector<Block> blocks;
  for (size_t i = 0; i < y.size(); ++i) {
    blocks.push_back({y[i] * w[i], w[i], 1});
    while (blocks.size() >= 2 && blocks[blocks.size() - 2].mean() < blocks.back().mean()) {
      blocks[blocks.size() - 2].sum += blocks.back().sum;
      blocks[blocks.size() - 2].weight += blocks.back().weight;
      blocks[blocks.size() - 2].count += blocks.back().count;
      blocks.pop_back();
    }
  }
  std::vector<double> out;
  out.reserve(y.size());
  for (const auto& b : blocks) out.insert(out.end(), static_cast<size_t>(b.count), b.mean());
  return out;
}

/// Dykstra's alternating projection in the weighted inner product over the
/// nonnegative orthant and one halfspace v[u] >= v[t] per chain edge.
void dykstra_component(const std::vector<int>& nodes,
                       const std::vector<std::pair<int, int>>& edges,
                       const Eigen::VectorXd& w, Eigen::VectorXd& v) {
  const size_t m = edges.size() + 1;  // constraints: orthant + each edge
  std::vector<Eigen::VectorXd> corr(m, Eigen::VectorXd::Zero(static_cast<int>(nodes.size())));
  std::vector<int> local(static_cast<size_t>(v.size()), -1);
  for (size_t i = 0; i < nodes.size(); ++i) local[static_cast<size_t>(nodes[i])] = static_cast<int>(i);

  Eigen::VectorXd x(static_cast<int>(nodes.size()));
  for (size_t i = 0; i < nodes.size(); ++i) x(static_cast<int>(i)) = v(nodes[i]);

  const int max_sweeps = 100000;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double change = 0.0;
    for (size_t ci = 0; ci < m; ++ci) {
      const Eigen::VectorXd before = x;
      x += corr[ci];
      if (ci == 0) {
        const Eigen::VectorXd proj = x.cwiseMax(0.0);
        corr[ci] = x - proj;
        x = proj;
      } else {
        const auto& [gu, gt] = edges[ci - 1];
        const int u = local[static_cast<size_t>(gu)], t = local[static_cast<size_t>(gt)];
        Eigen::VectorXd proj = x;
        if (x(u) < x(t)) {
          const double lam = (x(t) - x(u)) / (1.0 / w(gu) + 1.0 / w(gt));
          proj(u) = x(u) + lam / w(gu);
          proj(t) = x(t) - lam / w(gt);
        }
        corr[ci] = x - proj;
        x = proj;
      }
      change = std::max(change, (x - before).cwiseAbs().maxCoeff());
    }
    if (change < 1e-13) break;
  }
  for (size_t i = 0; i < nodes.size(); ++i) v(nodes[i]) = x(static_cast<int>(i));
}

}  // namespace

Eigen::VectorXd project_class_values(const Eigen::VectorXd& means, const K2Structure& k2) {
  const int nc = k2.num_classes();
  Eigen::VectorXd w(nc);
  for (int c = 0; c < nc; ++c) w(c) = k2.classes[static_cast<size_t>(c)].weight;

  Eigen::VectorXd v = means;
  for (int c = 0; c < nc; ++c)
    if (k2.classes[static_cast<size_t>(c)].zero) v(c) = 0.0;

  // Group the non-zero classes into components joined by chain edges.
  DisjointSets ds(nc);
  std::vector<int> indeg(static_cast<size_t>(nc), 0), outdeg(static_cast<size_t>(nc), 0);
  for (const auto& [u, t] : k2.chain_edges) {
    ds.unite(u, t);
    ++outdeg[static_cast<size_t>(u)];
    ++indeg[static_cast<size_t>(t)];
  }
  std::vector<std::vector<int>> comp_nodes(static_cast<size_t>(nc));
  std::vector<std::vector<std::pair<int, int>>> comp_edges(static_cast<size_t>(nc));
  for (int c = 0; c < nc; ++c)
    if (!k2.classes[static_cast<size_t>(c)].zero) comp_nodes[static_cast<size_t>(ds.find(c))].push_back(c);
  for (const auto& e : k2.chain_edges) comp_edges[static_cast<size_t>(ds.find(e.first))].push_back(e);

  for (int root = 0; root < nc; ++root) {
    auto& nodes = comp_nodes[static_cast<size_t>(root)];
    auto& edges = comp_edges[static_cast<size_t>(root)];
    if (nodes.empty()) continue;
    if (edges.empty()) {
      for (int c : nodes) v(c) = std::max(v(c), 0.0);
      continue;
    }
    bool is_path = edges.size() + 1 == nodes.size();
    for (int c : nodes)
      if (indeg[static_cast<size_t>(c)] > 1 || outdeg[static_cast<size_t>(c)] > 1) is_path = false;
    if (is_path) {
      // Order the path from its source, fit a nonincreasing sequence, clamp.
      int head = -1;
      for (int c : nodes)
        if (indeg[static_cast<size_t>(c)] == 0) head = c;
      std::vector<int> order{head};
      while (order.size() < nodes.size()) {
        const int cur = order.back();
        for (const auto& [u, t] : edges)
          if (u == cur) {
            order.push_back(t);
            break;
          }
      }
      std::vector<double> y, wt;
      for (int c : order) {
        y.push_back(v(c));
        wt.push_back(w(c));
      }
      const auto fit = pava_nonincreasing(y, wt);
      for (size_t i = 0; i < order.size(); ++i) v(order[i]) = std::max(fit[i], 0.0);
    } else {
      dykstra_component(nodes, edges, w, v);
    }
  }
  return v;
}

BlockSymMatrix project_k2(const BlockSymMatrix& z, const K2Structure& k2) {
  return expand_from_classes(project_class_values(collapse_to_classes(z, k2), k2), k2);
}

BlockSymMatrix project_psd_product_dual(const BlockSymMatrix& z) {
  return project_psd_product(z);  // self-dual
}

BlockSymMatrix project_k2_dual(const BlockSymMatrix& z, const K2Structure& k2) {
  return z + project_k2(-BlockSymMatrix(z), k2);
}

}  // namespace bbcpop
