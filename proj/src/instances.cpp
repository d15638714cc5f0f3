#include "bbcpop/instances.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

namespace bbcpop {

namespace {

void enumerate_support(const std::vector<int>& clique, size_t pos, int budget, ExponentVec& cur,
                       std::set<ExponentVec, GrlexLess>& out) {
  if (pos == clique.size()) {
    out.insert(cur);
    return;
  }
  const int var = clique[pos];
  for (int e = 0; e <= budget; ++e) {
    cur[static_cast<size_t>(var)] = e;
    enumerate_support(clique, pos + 1, budget - e, cur, out);
  }
  cur[static_cast<size_t>(var)] = 0;
}

bool comp_satisfied(const ComplementarityFamily& comp, const std::vector<double>& x) {
  for (const auto& set : comp.sets) {
    bool has_zero = false;
    for (int i : set)
      if (x[static_cast<size_t>(i)] == 0.0) {
        has_zero = true;
        break;
      }
    if (!has_zero) return false;
  }
  return true;
}

}  // namespace

PopInstance gen_random_pop(const CliqueCover& cover, int d, const IndexPartition& part,
                           int comp_count, uint64_t seed) {
  if (d < 1) throw std::invalid_argument("degree must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);

  std::set<ExponentVec, GrlexLess> support;
  ExponentVec cur(static_cast<size_t>(part.n), 0);
  for (const auto& clique : cover.cliques) enumerate_support(clique, 0, d, cur, support);

  PopInstance pop;
  pop.part = part;
  Polynomial f0(part.n);
  for (const auto& alpha : support) f0.add_term(alpha, coef(rng));
  pop.f0 = std::move(f0);

  std::vector<size_t> usable;
  for (size_t k = 0; k < cover.cliques.size(); ++k)
    if (cover.cliques[k].size() >= 2) usable.push_back(k);
  if (comp_count > 0 && !usable.empty()) {
    std::set<std::pair<int, int>> pairs;
    std::uniform_int_distribution<size_t> pick_clique(0, usable.size() - 1);
    int attempts = 0;
    while (static_cast<int>(pairs.size()) < comp_count && attempts < 200 * comp_count) {
      ++attempts;
      const auto& clique = cover.cliques[usable[pick_clique(rng)]];
      std::uniform_int_distribution<size_t> pick(0, clique.size() - 1);
      int i = clique[pick(rng)], j = clique[pick(rng)];
      if (i == j) continue;
      if (i > j) std::swap(i, j);
      pairs.emplace(i, j);
    }
    for (const auto& [i, j] : pairs) pop.comp.sets.push_back({i, j});
  }

  std::ostringstream prov;
  prov << "random(d=" << d << ", comp=" << comp_count << ", seed=" << seed << ")";
  pop.provenance = prov.str();
  return pop;
}

QapInstance parse_qaplib(std::istream& in, const std::string& name) {
  QapInstance q;
  if (!(in >> q.r) || q.r < 1)
    throw ParseError(name + ": expected a positive size as the first token");
  q.A.resize(q.r, q.r);
  q.B.resize(q.r, q.r);
  for (Eigen::MatrixXd* m : {&q.A, &q.B})
    for (int i = 0; i < q.r; ++i)
      for (int j = 0; j < q.r; ++j) {
        double v;
        if (!(in >> v)) {
          std::ostringstream err;
          err << name << ": truncated at matrix " << (m == &q.A ? 1 : 2) << ", row " << i + 1
              << ", column " << j + 1;
          throw ParseError(err.str());
        }
        (*m)(i, j) = v;
      }
  return q;
}

QapInstance load_qaplib(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  return parse_qaplib(in, path);
}

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  const Eigen::MatrixXd mtm = m.transpose() * m;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(mtm.rows());
  v.normalize();
  double lam = 0.0;
  for (int it = 0; it < 100000; ++it) {
    Eigen::VectorXd w = mtm * v;
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    w /= nw;
    const double lam_new = w.dot(mtm * w);
    const bool done = std::abs(lam_new - lam) <= 1e-10 * std::max(1.0, std::abs(lam_new));
    lam = lam_new;
    v = std::move(w);
    if (done && it > 2) break;
  }
  return std::sqrt(std::max(lam, 0.0));
}

PopInstance qap_to_pop(const QapInstance& q, double lambda) {
  if (lambda <= 0.0) throw std::invalid_argument("penalty parameter must be positive");
  const int r = q.r, n = r * r;

  // C = [I (x) e^T; e^T (x) I], d = [e; e]; scale the penalty so its Hessian
  // norm is comparable to that of the quadratic term.
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(2 * r, n);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < r; ++k) {
      C(i, i * r + k) = 1.0;      // column-block sums (I (x) e^T)
      C(r + k, i * r + k) = 1.0;  // within-block position sums (e^T (x) I)
    }
  const Eigen::VectorXd d = Eigen::VectorXd::Ones(2 * r);

  Eigen::MatrixXd M(n + 1, n + 1);
  M(0, 0) = d.dot(d);
  M.block(0, 1, 1, n) = (d.transpose() * C);
  M.block(1, 0, n, 1) = (C.transpose() * d);
  M.block(1, 1, n, n) = C.transpose() * C;
  const double scale = lambda * (spectral_norm(q.A) * spectral_norm(q.B)) / spectral_norm(M);

  // Objective x^T (B (x) A) x + scale * ||Cx - d||^2.
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < r; ++k)
        for (int l = 0; l < r; ++l) Q(i * r + k, j * r + l) = q.B(i, j) * q.A(k, l);
  Q += scale * (C.transpose() * C);
  const Eigen::VectorXd lin = -2.0 * scale * (C.transpose() * d);
  const double cst = scale * d.dot(d);

  PopInstance pop;
  pop.part = IndexPartition::all_box(n);
  Polynomial f0(n);
  ExponentVec e(static_cast<size_t>(n), 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double c = (i == j) ? Q(i, i) : Q(i, j);
      if (c == 0.0) continue;
      e[static_cast<size_t>(i)] += 1;
      e[static_cast<size_t>(j)] += 1;
      f0.add_term(e, c);
      e[static_cast<size_t>(i)] -= 1;
      e[static_cast<size_t>(j)] -= 1;
    }
  for (int i = 0; i < n; ++i) {
    if (lin(i) == 0.0) continue;
    e[static_cast<size_t>(i)] = 1;
    f0.add_term(e, lin(i));
    e[static_cast<size_t>(i)] = 0;
  }
  if (cst != 0.0) f0.add_term(e, cst);
  pop.f0 = std::move(f0);

  for (int p = 0; p < r; ++p) {  // within one column block of vec(X)
    std::vector<int> J;
    for (int k = 0; k < r; ++k) J.push_back(p * r + k);
    for (size_t a = 0; a < J.size(); ++a)
      for (size_t b = a + 1; b < J.size(); ++b) pop.comp.sets.push_back({J[a], J[b]});
  }
  for (int k = 0; k < r; ++k) {  // same position across column blocks
    std::vector<int> J;
    for (int p = 0; p < r; ++p) J.push_back(p * r + k);
    for (size_t a = 0; a < J.size(); ++a)
      for (size_t b = a + 1; b < J.size(); ++b) pop.comp.sets.push_back({J[a], J[b]});
  }

  std::ostringstream prov;
  prov << "qap(r=" << r << ", lambda=" << lambda << ")";
  pop.provenance = prov.str();
  return pop;
}

BruteForceResult brute_force_optimum(const PopInstance& pop, int grid_per_box) {
  if (grid_per_box < 2) throw std::invalid_argument("grid must have at least 2 points");
  const int n = pop.part.n;
  double combos = 1.0;
  std::vector<std::vector<double>> values(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (pop.part.binary(i)) {
      values[static_cast<size_t>(i)] = {0.0, 1.0};
    } else {
      for (int j = 0; j < grid_per_box; ++j)
        values[static_cast<size_t>(i)].push_back(static_cast<double>(j) / (grid_per_box - 1));
    }
    combos *= static_cast<double>(values[static_cast<size_t>(i)].size());
    if (combos > 2e7) throw std::invalid_argument("instance too large for exhaustive search");
  }

  BruteForceResult res;
  res.exact = pop.part.box_indices().empty();
  res.value = std::numeric_limits<double>::infinity();
  std::vector<size_t> idx(static_cast<size_t>(n), 0);
  std::vector<double> x(static_cast<size_t>(n), 0.0);
  while (true) {
    for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = values[static_cast<size_t>(i)][idx[static_cast<size_t>(i)]];
    if (comp_satisfied(pop.comp, x)) {
      const double v = pop.f0.eval(x);
      if (v < res.value) {
        res.value = v;
        res.argmin = x;
      }
    }
    int pos = 0;
    while (pos < n) {
      if (++idx[static_cast<size_t>(pos)] < values[static_cast<size_t>(pos)].size()) break;
      idx[static_cast<size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == n) break;
  }
  return res;
}

std::pair<double, std::vector<double>> heuristic_upper_bound(const PopInstance& pop) {
  const int n = pop.part.n;
  std::vector<double> x(static_cast<size_t>(n), 0.0);  // always feasible
  double best = pop.f0.eval(x);
  for (int pass = 0; pass < 50; ++pass) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      const double old = x[static_cast<size_t>(i)];
      const double flip = old == 0.0 ? 1.0 : 0.0;
      x[static_cast<size_t>(i)] = flip;
      if (comp_satisfied(pop.comp, x)) {
        const double v = pop.f0.eval(x);
        if (v < best - 1e-15) {
          best = v;
          changed = true;
          continue;
        }
      }
      x[static_cast<size_t>(i)] = old;
    }
    if (!changed) break;
  }
  return {best, x};
}

std::string pop_to_json(const PopInstance& pop) {
  nlohmann::json j;
  j["n"] = pop.part.n;
  auto& obj = j["objective"] = nlohmann::json::array();
  for (const auto& [alpha, c] : pop.f0.terms()) obj.push_back({{"expo", alpha}, {"coef", c}});
  j["bin"] = pop.part.bin_indices();
  j["box"] = pop.part.box_indices();
  j["comp"] = pop.comp.sets;
  if (!pop.provenance.empty()) j["provenance"] = pop.provenance;
  return j.dump(2);
}

PopInstance pop_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid instance JSON: ") + e.what());
  }
  try {
    const int n = j.at("n").get<int>();
    if (n < 1) throw ParseError("instance dimension must be positive");
    const auto bin = j.value("bin", std::vector<int>{});
    for (int i : bin)
      if (i < 0 || i >= n) throw ParseError("binary index out of range");
    PopInstance pop;
    pop.part = IndexPartition::from_bin_set(n, bin);
    if (j.contains("box")) {
      const auto box = j.at("box").get<std::vector<int>>();
      for (int i : box) {
        if (i < 0 || i >= n) throw ParseError("box index out of range");
        if (pop.part.binary(i)) throw ParseError("index listed as both binary and box");
      }
      if (bin.size() + box.size() != static_cast<size_t>(n))
        throw ParseError("bin and box lists must partition the variables");
    }
    Polynomial f0(n);
    for (const auto& term : j.at("objective")) {
      const auto expo = term.at("expo").get<ExponentVec>();
      if (static_cast<int>(expo.size()) != n) throw ParseError("exponent length mismatch");
      for (int e : expo)
        if (e < 0) throw ParseError("negative exponent");
      f0.add_term(expo, term.at("coef").get<double>());
    }
    pop.f0 = std::move(f0);
    for (const auto& set : j.value("comp", std::vector<std::vector<int>>{})) {
      if (set.empty()) throw ParseError("empty complementarity set");
      for (int i : set)
        if (i < 0 || i >= n) throw ParseError("complementarity index out of range");
      pop.comp.sets.push_back(set);
    }
    pop.provenance = j.value("provenance", std::string{});
    return pop;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid instance JSON: ") + e.what());
  }
}

PopInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return pop_from_json(buf.str());
}

void save_instance(const PopInstance& pop, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  out << pop_to_json(pop) << "\n";
}

}  // namespace bbcpop
