#include "bbcpop/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bbcpop {

int total_degree(const ExponentVec& a) {
  return std::accumulate(a.begin(), a.end(), 0);
}

int max_degree(const ExponentVec& a) {
  return a.empty() ? 0 : *std::max_element(a.begin(), a.end());
}

IndexPartition IndexPartition::all_binary(int n) {
  IndexPartition p;
  p.n = n;
  p.is_bin.assign(static_cast<size_t>(n), 1);
  return p;
}

IndexPartition IndexPartition::all_box(int n) {
  IndexPartition p;
  p.n = n;
  p.is_bin.assign(static_cast<size_t>(n), 0);
  return p;
}

IndexPartition IndexPartition::from_bin_set(int n, const std::vector<int>& bin) {
  IndexPartition p = all_box(n);
  for (int i : bin) {
    if (i < 0 || i >= n) throw std::out_of_range("binary index out of range");
    p.is_bin[static_cast<size_t>(i)] = 1;
  }
  return p;
}

std::vector<int> IndexPartition::bin_indices() const {
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (binary(i)) out.push_back(i);
  return out;
}

std::vector<int> IndexPartition::box_indices() const {
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (!binary(i)) out.push_back(i);
  return out;
}

std::vector<ExponentVec> ComplementarityFamily::gammas(int n) const {
  std::vector<ExponentVec> out;
  out.reserve(sets.size());
  for (const auto& c : sets) {
    if (c.empty()) throw std::invalid_argument("empty complementarity set");
    ExponentVec g(static_cast<size_t>(n), 0);
    for (int i : c) {
      if (i < 0 || i >= n) throw std::out_of_range("complementarity index out of range");
      g[static_cast<size_t>(i)] = 1;
    }
    out.push_back(std::move(g));
  }
  return out;
}

ExponentVec reduce_exponent(const ExponentVec& alpha, const IndexPartition& part) {
  if (static_cast<int>(alpha.size()) != part.n)
    throw std::invalid_argument("exponent dimension does not match partition");
  ExponentVec out = alpha;
  for (int i = 0; i < part.n; ++i)
    if (part.binary(i) && out[static_cast<size_t>(i)] > 1) out[static_cast<size_t>(i)] = 1;
  return out;
}

ExponentVec scaled_reduce(const ExponentVec& alpha, int c, const IndexPartition& part) {
  if (c < 1) throw std::invalid_argument("scale must be >= 1");
  ExponentVec scaled(alpha.size());
  for (size_t i = 0; i < alpha.size(); ++i) scaled[i] = c * alpha[i];
  return reduce_exponent(scaled, part);
}

bool dominates(const ExponentVec& alpha, const ExponentVec& gamma) {
  if (alpha.size() != gamma.size()) return false;
  for (size_t i = 0; i < alpha.size(); ++i)
    if (alpha[i] < gamma[i]) return false;
  return true;
}

void Polynomial::add_term(const ExponentVec& alpha, double c) {
  if (static_cast<int>(alpha.size()) != n_)
    throw std::invalid_argument("exponent dimension does not match polynomial");
  if (c == 0.0) return;
  auto it = terms_.find(alpha);
  if (it == terms_.end()) {
    terms_.emplace(alpha, c);
  } else {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Polynomial::coeff(const ExponentVec& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::constant_term() const {
  return coeff(ExponentVec(static_cast<size_t>(n_), 0));
}

double Polynomial::eval(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != n_)
    throw std::invalid_argument("point dimension does not match polynomial");
  double v = 0.0;
  for (const auto& [alpha, c] : terms_) {
    double m = c;
    for (int i = 0; i < n_; ++i)
      for (int p = 0; p < alpha[static_cast<size_t>(i)]; ++p) m *= x[static_cast<size_t>(i)];
    v += m;
  }
  return v;
}

int Polynomial::max_exponent_degree() const {
  int d = 0;
  for (const auto& [alpha, c] : terms_) d = std::max(d, max_degree(alpha));
  return d;
}

int Polynomial::max_total_degree() const {
  int d = 0;
  for (const auto& [alpha, c] : terms_) d = std::max(d, total_degree(alpha));
  return d;
}

Polynomial canonicalize_objective(const Polynomial& f, const IndexPartition& part) {
  Polynomial out(f.dim());
  for (const auto& [alpha, c] : f.terms()) out.add_term(reduce_exponent(alpha, part), c);
  return out;
}

}  // namespace bbcpop
