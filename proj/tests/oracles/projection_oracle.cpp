#include "oracles/projection_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace bbcpop::test {

namespace {

// Rows of the inequality system A v >= 0: one unit row per variable and one
// difference row per edge.
Eigen::MatrixXd constraint_rows(int n, const std::vector<std::pair<int, int>>& edges) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + static_cast<int>(edges.size()), n);
  for (int i = 0; i < n; ++i) A(i, i) = 1.0;
  for (size_t e = 0; e < edges.size(); ++e) {
    A(n + static_cast<int>(e), edges[e].first) = 1.0;
    A(n + static_cast<int>(e), edges[e].second) = -1.0;
  }
  return A;
}

Eigen::VectorXd strictly_feasible_start(int n, const std::vector<std::pair<int, int>>& edges,
                                        const Eigen::VectorXd& m) {
  // Longest-path depth from sources; deeper nodes get smaller values so every
  // edge has slack at least one.
  std::vector<int> depth(static_cast<size_t>(n), 0);
  for (int pass = 0; pass < n + 1; ++pass) {
    bool changed = false;
    for (const auto& [u, t] : edges)
      if (depth[static_cast<size_t>(t)] < depth[static_cast<size_t>(u)] + 1) {
        depth[static_cast<size_t>(t)] = depth[static_cast<size_t>(u)] + 1;
        changed = true;
      }
    if (!changed) break;
  }
  const int max_depth = edges.empty() ? 0 : *std::max_element(depth.begin(), depth.end());
  const double top = max_depth + m.cwiseAbs().maxCoeff() + 2.0;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = top - depth[static_cast<size_t>(i)];
  return v;
}

}  // namespace

Eigen::VectorXd project_classes_oracle(const Eigen::VectorXd& m, const Eigen::VectorXd& w,
                                       const std::vector<std::pair<int, int>>& edges) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return m;
  const Eigen::MatrixXd A = constraint_rows(n, edges);
  const int mrows = static_cast<int>(A.rows());

  Eigen::VectorXd v = strictly_feasible_start(n, edges, m);
  double mu = 1.0;
  while (mu > 1e-13) {
    for (int newton = 0; newton < 100; ++newton) {
      const Eigen::VectorXd slack = A * v;
      Eigen::VectorXd grad = w.cwiseProduct(v - m);
      Eigen::MatrixXd hess = w.asDiagonal();
      for (int r = 0; r < mrows; ++r) {
        grad -= (mu / slack(r)) * A.row(r).transpose();
        hess += (mu / (slack(r) * slack(r))) * (A.row(r).transpose() * A.row(r));
      }
      const Eigen::VectorXd dir = hess.ldlt().solve(-grad);
      if (dir.norm() < 1e-14 * (1.0 + v.norm())) break;
      // Fraction-to-boundary step, then backtrack on the barrier objective.
      double step = 1.0;
      const Eigen::VectorXd dslack = A * dir;
      for (int r = 0; r < mrows; ++r)
        if (dslack(r) < 0.0) step = std::min(step, -0.95 * slack(r) / dslack(r));
      auto barrier = [&](const Eigen::VectorXd& z) {
        const Eigen::VectorXd s = A * z;
        if ((s.array() <= 0.0).any()) return std::numeric_limits<double>::infinity();
        return 0.5 * (z - m).cwiseProduct(w).dot(z - m) - mu * s.array().log().sum();
      };
      const double f0 = barrier(v);
      while (step > 1e-16 && barrier(v + step * dir) > f0 - 1e-12 * std::abs(f0)) step *= 0.5;
      if (step <= 1e-16) break;
      v += step * dir;
    }
    mu *= 0.2;
  }

  // Active-set polish: pin near-active constraints and solve the KKT system.
  const Eigen::VectorXd slack = A * v;
  std::vector<int> active;
  for (int r = 0; r < mrows; ++r)
    if (slack(r) < 1e-7 * (1.0 + m.cwiseAbs().maxCoeff())) active.push_back(r);
  if (!active.empty()) {
    const int na = static_cast<int>(active.size());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + na, n + na);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + na);
    K.topLeftCorner(n, n) = Eigen::MatrixXd(w.asDiagonal());
    for (int a = 0; a < na; ++a) {
      K.block(0, n + a, n, 1) = -A.row(active[static_cast<size_t>(a)]).transpose();
      K.block(n + a, 0, 1, n) = A.row(active[static_cast<size_t>(a)]);
    }
    rhs.head(n) = w.cwiseProduct(m);
    const Eigen::VectorXd sol = K.fullPivLu().solve(rhs);
    const Eigen::VectorXd vp = sol.head(n);
    const Eigen::VectorXd lam = sol.tail(na);
    const Eigen::VectorXd sp = A * vp;
    if (lam.minCoeff() >= -1e-9 && sp.minCoeff() >= -1e-10) v = vp;
  }
  return v.cwiseMax(0.0);
}

Eigen::VectorXd project_class_values_oracle(const Eigen::VectorXd& means, const K2Structure& k2) {
  // Restrict to non-zero classes; zero classes are fixed at 0 and their
  // incident edges are redundant with nonnegativity.
  const int nc = k2.num_classes();
  std::vector<int> local(static_cast<size_t>(nc), -1);
  std::vector<int> global;
  for (int c = 0; c < nc; ++c)
    if (!k2.classes[static_cast<size_t>(c)].zero) {
      local[static_cast<size_t>(c)] = static_cast<int>(global.size());
      global.push_back(c);
    }
  Eigen::VectorXd m(static_cast<int>(global.size())), w(static_cast<int>(global.size()));
  for (size_t i = 0; i < global.size(); ++i) {
    m(static_cast<int>(i)) = means(global[i]);
    w(static_cast<int>(i)) = k2.classes[static_cast<size_t>(global[i])].weight;
  }
  std::vector<std::pair<int, int>> edges;
  for (const auto& [u, t] : k2.chain_edges)
    edges.emplace_back(local[static_cast<size_t>(u)], local[static_cast<size_t>(t)]);

  const Eigen::VectorXd fit = project_classes_oracle(m, w, edges);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(nc);
  for (size_t i = 0; i < global.size(); ++i) out(global[i]) = fit(static_cast<int>(i));
  return out;
}

}  // namespace bbcpop::test
