#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "bbcpop/instances.hpp"
#include "bbcpop/relaxation.hpp"
#include "bbcpop/solver.hpp"
#include "bbcpop/sparsity.hpp"

using namespace bbcpop;

namespace {

bool in_some_clique(const CliqueCover& cover, const ExponentVec& e) {
  for (const auto& c : cover.cliques) {
    bool ok = true;
    for (size_t i = 0; i < e.size(); ++i)
      if (e[i] >= 1 && std::find(c.begin(), c.end(), static_cast<int>(i)) == c.end()) ok = false;
    if (ok) return true;
  }
  return false;
}

std::vector<double> vec_of_permutation(const std::vector<int>& sigma) {
  // column-major vectorization of the permutation matrix X with X(sigma[j], j) = 1
  const int r = static_cast<int>(sigma.size());
  std::vector<double> x(static_cast<size_t>(r * r), 0.0);
  for (int j = 0; j < r; ++j) x[static_cast<size_t>(j * r + sigma[static_cast<size_t>(j)])] = 1.0;
  return x;
}

}  // namespace

TEST_CASE("random instances are deterministic per seed and clique-supported") {
  const auto cover = chordal_extend_and_cliques(chordal_random_pattern(9, 0.5, 7));
  const auto part = IndexPartition::all_binary(9);
  const auto a = gen_random_pop(cover, 3, part, 6, 11);
  const auto b = gen_random_pop(cover, 3, part, 6, 11);
  const auto c = gen_random_pop(cover, 3, part, 6, 12);
  CHECK(pop_to_json(a) == pop_to_json(b));
  CHECK(pop_to_json(a) != pop_to_json(c));

  for (const auto& [expo, coef] : a.f0.terms()) {
    CHECK(total_degree(expo) <= 3);
    CHECK(in_some_clique(cover, expo));
  }
  REQUIRE(a.comp.sets.size() == 6);
  for (const auto& s : a.comp.sets) {
    REQUIRE(s.size() == 2);
    CHECK(s[0] != s[1]);
    ExponentVec g(9, 0);
    g[static_cast<size_t>(s[0])] = 1;
    g[static_cast<size_t>(s[1])] = 1;
    CHECK(in_some_clique(cover, g));
  }
  CHECK(gen_random_pop(cover, 2, part, 0, 1).comp.sets.empty());
}

TEST_CASE("matrix-pair file parsing") {
  std::istringstream good("2\n0 1\n1 0\n\n0 2\n2 0\n");
  const auto q = parse_qaplib(good, "toy");
  CHECK(q.r == 2);
  Eigen::MatrixXd A(2, 2), B(2, 2);
  A << 0, 1, 1, 0;
  B << 0, 2, 2, 0;
  CHECK((q.A - A).norm() == doctest::Approx(0.0));
  CHECK((q.B - B).norm() == doctest::Approx(0.0));

  std::istringstream truncated("3\n0 1 2\n1 0 1\n");
  CHECK_THROWS_AS(parse_qaplib(truncated, "bad"), ParseError);
  std::istringstream zero("0\n");
  CHECK_THROWS_AS(parse_qaplib(zero, "bad"), ParseError);
  CHECK_THROWS_AS(load_qaplib("/nonexistent/file.dat"), ParseError);
}

TEST_CASE("assignment-problem reformulation structure") {
  QapInstance q;
  q.r = 2;
  q.A.resize(2, 2);
  q.B.resize(2, 2);
  q.A << 0, 1, 1, 0;
  q.B << 0, 2, 2, 0;
  const auto pop = qap_to_pop(q);
  CHECK(pop.f0.dim() == 4);
  CHECK(pop.part.bin_indices().empty());  // all box variables

  std::set<std::set<int>> got;
  for (const auto& s : pop.comp.sets) got.insert(std::set<int>(s.begin(), s.end()));
  const std::set<std::set<int>> expected{{0, 1}, {2, 3}, {0, 2}, {1, 3}};
  CHECK(got == expected);
}

TEST_CASE("reformulated objective matches the trace form at permutations") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> unif(0.0, 5.0);
  for (int r : {2, 3}) {
    QapInstance q;
    q.r = r;
    q.A.resize(r, r);
    q.B.resize(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        q.A(i, j) = i == j ? 0.0 : unif(rng);
        q.B(i, j) = i == j ? 0.0 : unif(rng);
      }
    q.A = ((q.A + q.A.transpose()) / 2.0).eval();
    q.B = ((q.B + q.B.transpose()) / 2.0).eval();
    const auto pop = qap_to_pop(q);

    std::vector<int> sigma(static_cast<size_t>(r));
    for (int i = 0; i < r; ++i) sigma[static_cast<size_t>(i)] = i;
    do {
      Eigen::MatrixXd X = Eigen::MatrixXd::Zero(r, r);
      for (int j = 0; j < r; ++j) X(sigma[static_cast<size_t>(j)], j) = 1.0;
      const double trace_form = (q.A * X * q.B.transpose() * X.transpose()).trace();
      CHECK(pop.f0.eval(vec_of_permutation(sigma)) ==
            doctest::Approx(trace_form).epsilon(1e-9));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
  }
}

TEST_CASE("reformulation penalty is active off the assignment polytope") {
  QapInstance q;
  q.r = 2;
  q.A.resize(2, 2);
  q.B.resize(2, 2);
  q.A << 0, 1, 1, 0;
  q.B << 0, 2, 2, 0;
  const auto pop = qap_to_pop(q);
  // the penalty vanishes exactly at permutation vectorizations
  CHECK(pop.f0.eval(vec_of_permutation({0, 1})) == doctest::Approx(4.0));
  CHECK(pop.f0.eval(vec_of_permutation({1, 0})) == doctest::Approx(4.0));
  // doubling up a column violates the sum constraints: large penalty
  CHECK(pop.f0.eval({1.0, 1.0, 0.0, 0.0}) > 1.0);
}

TEST_CASE("power-iteration norm agrees with the SVD") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -4.0;
  CHECK(spectral_norm(d) == doctest::Approx(4.0));

  std::mt19937_64 rng(23);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd m(4, 6);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 6; ++j) m(i, j) = gauss(rng);
    const double svd = m.jacobiSvd().singularValues()(0);
    CHECK(spectral_norm(m) == doctest::Approx(svd).epsilon(1e-8));
  }
}

TEST_CASE("exhaustive minimization handles small instances") {
  PopInstance pop;  // the worked three-variable example, optimum -1
  pop.part = IndexPartition::from_bin_set(3, {1, 2});
  Polynomial f(3);
  f.add_term({1, 1, 0}, -1.0);
  f.add_term({0, 1, 1}, -1.0);
  pop.f0 = f;
  pop.comp.sets = {{0, 1}};
  const auto res = brute_force_optimum(pop, 5);
  CHECK(res.value == doctest::Approx(-1.0));
  CHECK_FALSE(res.exact);  // one box coordinate was gridded

  PopInstance flat;
  flat.part = IndexPartition::all_binary(2);
  flat.f0 = Polynomial(2);
  CHECK(brute_force_optimum(flat).value == doctest::Approx(0.0));

  PopInstance lin;
  lin.part = IndexPartition::all_binary(1);
  Polynomial g(1);
  g.add_term({1}, 1.0);
  lin.f0 = g;
  const auto r = brute_force_optimum(lin);
  CHECK(r.value == doctest::Approx(0.0));
  CHECK(r.exact);
  CHECK(r.argmin == std::vector<double>{0.0});

  PopInstance big;
  big.part = IndexPartition::all_binary(40);
  big.f0 = Polynomial(40);
  CHECK_THROWS_AS(brute_force_optimum(big), std::invalid_argument);
}

TEST_CASE("greedy upper bounds dominate the optimum") {
  for (uint64_t seed = 1; seed <= 15; ++seed) {
    const int n = 3 + static_cast<int>(seed % 5);
    const auto cover = chordal_extend_and_cliques(chordal_random_pattern(n, 0.6, seed));
    const auto pop = gen_random_pop(cover, 2, IndexPartition::all_binary(n),
                                    static_cast<int>(seed % 4), seed);
    const auto exact = brute_force_optimum(pop);
    REQUIRE(exact.exact);
    const auto [ub, x] = heuristic_upper_bound(pop);
    CHECK(ub >= exact.value - 1e-12);
    CHECK(ub == doctest::Approx(pop.f0.eval(x)));
  }
}

TEST_CASE("serialization round trip") {
  const auto cover = chordal_extend_and_cliques(chordal_random_pattern(6, 0.6, 3));
  auto pop = gen_random_pop(cover, 3, IndexPartition::from_bin_set(6, {0, 2, 4}), 4, 3);
  pop.provenance = "round-trip test";
  const auto back = pop_from_json(pop_to_json(pop));
  CHECK(pop_to_json(back) == pop_to_json(pop));
  CHECK(back.provenance == pop.provenance);
  CHECK(back.part.bin_indices() == pop.part.bin_indices());
  CHECK(back.comp.sets == pop.comp.sets);

  CHECK_THROWS_AS(pop_from_json("not json"), ParseError);
  CHECK_THROWS_AS(pop_from_json("{\"n\": 2}"), ParseError);
  CHECK_THROWS_AS(pop_from_json(
                      R"({"n":2,"objective":[{"expo":[1],"coef":1.0}],"bin":[],"box":[0,1],"comp":[]})"),
                  ParseError);
  CHECK_THROWS_AS(pop_from_json(
                      R"({"n":2,"objective":[],"bin":[5],"box":[0,1],"comp":[]})"),
                  ParseError);
}

TEST_CASE("tiny assignment problem solves to its enumerated optimum") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> unif(0.0, 3.0);
  QapInstance q;
  q.r = 3;
  q.A.resize(3, 3);
  q.B.resize(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double a = i == j ? 0.0 : unif(rng);
      const double b = i == j ? 0.0 : unif(rng);
      q.A(i, j) = q.A(j, i) = a;
      q.B(i, j) = q.B(j, i) = b;
    }

  double best = std::numeric_limits<double>::infinity();
  std::vector<int> sigma{0, 1, 2};
  do {
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(3, 3);
    for (int j = 0; j < 3; ++j) X(sigma[static_cast<size_t>(j)], j) = 1.0;
    best = std::min(best, (q.A * X * q.B.transpose() * X.transpose()).trace());
  } while (std::next_permutation(sigma.begin(), sigma.end()));

  const auto pop = qap_to_pop(q);
  const auto cop = assemble(pop, {});
  const auto cert = bp_solve(cop, best, {});
  CHECK(cert.y0_vl <= best + 1e-6 * (1.0 + std::abs(best)));
}
