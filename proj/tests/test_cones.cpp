#include <doctest.h>

#include <random>

#include "bbcpop/cones.hpp"
#include "bbcpop/instances.hpp"
#include "oracles/projection_oracle.hpp"

using namespace bbcpop;

namespace {

BlockSymMatrix random_symmetric(const std::vector<int>& sizes, std::mt19937_64& rng,
                                double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  BlockSymMatrix z(sizes);
  for (auto& b : z.blocks)
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j <= i; ++j) b(i, j) = b(j, i) = gauss(rng);
  return z;
}

DnnCop random_cop(uint64_t seed, int n = 4) {
  std::mt19937_64 rng(seed * 77 + 13);
  std::uniform_int_distribution<int> bit(0, 1);
  std::vector<int> bins;
  for (int i = 0; i < n; ++i)
    if (bit(rng)) bins.push_back(i);
  const auto part = IndexPartition::from_bin_set(n, bins);
  const auto cover = chordal_extend_and_cliques(chordal_random_pattern(n, 0.7, seed));
  const int comp = static_cast<int>(seed % 3);
  return assemble(gen_random_pop(cover, 2, part, comp, seed), {});
}

}  // namespace

TEST_CASE("spectral projection basics") {
  BlockSymMatrix z({2, 2});
  z.blocks[0] << 2.0, 0.0, 0.0, 3.0;
  z.blocks[1] << -1.0, 0.0, 0.0, 5.0;
  const auto p = project_psd_product(z);
  CHECK((p.blocks[0] - z.blocks[0]).norm() == doctest::Approx(0.0));
  CHECK(p.blocks[1](0, 0) == doctest::Approx(0.0));
  CHECK(p.blocks[1](1, 1) == doctest::Approx(5.0));
  CHECK(lambda_min(z) == doctest::Approx(-1.0));

  const auto id = BlockSymMatrix::identity_like(z);
  CHECK(lambda_min(id) == doctest::Approx(1.0));
  CHECK(lambda_min(BlockSymMatrix::zeros_like(z)) == doctest::Approx(0.0));
  const auto neg = project_psd_product(-BlockSymMatrix(id));
  CHECK(neg.norm() == doctest::Approx(0.0));
}

TEST_CASE("psd projection properties on random tuples") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto z = random_symmetric({3, 4}, rng);
    const auto w = random_symmetric({3, 4}, rng);
    const auto pz = project_psd_product(z);
    const auto pw = project_psd_product(w);
    CHECK((project_psd_product(pz) - pz).norm() <= 1e-10 * (1.0 + pz.norm()));  // idempotent
    CHECK((pz - pw).norm() <= (z - w).norm() + 1e-12);                          // nonexpansive
    // Moreau: z = P(z) - P*(-z), with orthogonal parts
    const auto dz = project_psd_product_dual(-BlockSymMatrix(z));
    CHECK((z - (pz - dz)).norm() <= 1e-10 * (1.0 + z.norm()));
    CHECK(std::abs(pz.inner(dz)) <= 1e-10 * (1.0 + z.squared_norm()));
    CHECK(lambda_min(pz) >= -1e-10);
  }
}

TEST_CASE("class collapse and expansion are adjoint pieces") {
  std::mt19937_64 rng(17);
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    const auto cop = random_cop(seed);
    const auto z = random_symmetric(cop.block_sizes(), rng);
    const auto means = collapse_to_classes(z, cop.k2);
    const auto back = expand_from_classes(means, cop.k2);
    // expanding the means is exactly the projection onto the equality subspace:
    // re-collapsing is a fixed point
    const auto means2 = collapse_to_classes(back, cop.k2);
    CHECK((means - means2).norm() <= 1e-10 * (1.0 + means.norm()));
    // and the class weights are the entry counts
    double total = 0.0;
    for (const auto& c : cop.k2.classes) total += c.weight;
    double entries = 0.0;
    for (int s : cop.block_sizes()) entries += static_cast<double>(s) * s;
    CHECK(total == doctest::Approx(entries));
  }
}

TEST_CASE("two-node chain pools and clamps") {
  K2Structure k2;
  for (int c = 0; c < 2; ++c) {
    K2Structure::ClassInfo info;
    info.key = {c};
    info.weight = 1.0;
    k2.classes.push_back(info);
  }
  k2.chain_edges = {{0, 1}};
  Eigen::MatrixXi ids(2, 2);  // diagonal entries carry the two classes
  ids << 0, 0, 0, 1;
  // entry (0,1)/(1,0) also class 0 so weights: class0 = 3, class1 = 1
  k2.classes[0].weight = 3.0;
  k2.entry_class.push_back(ids);

  Eigen::VectorXd m(2);
  m << 0.0, 1.0;  // violates value(0) >= value(1)
  const auto v = project_class_values(m, k2);
  // weighted pooling: (3*0 + 1*1)/4 = 0.25 on both
  CHECK(v(0) == doctest::Approx(0.25));
  CHECK(v(1) == doctest::Approx(0.25));

  m << -1.0, -2.0;
  const auto w = project_class_values(m, k2);
  CHECK(w(0) == doctest::Approx(0.0));
  CHECK(w(1) == doctest::Approx(0.0));

  m << 5.0, 2.0;  // already ordered: untouched
  const auto u = project_class_values(m, k2);
  CHECK(u(0) == doctest::Approx(5.0));
  CHECK(u(1) == doctest::Approx(2.0));
}

TEST_CASE("polyhedral projection matches the interior-point oracle") {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> gauss(0.0, 2.0);
  int dag_cases = 0;
  for (uint64_t seed = 1; seed <= 50; ++seed) {
    const auto cop = random_cop(seed, 3 + static_cast<int>(seed % 3));
    Eigen::VectorXd means(cop.k2.num_classes());
    for (int c = 0; c < means.size(); ++c) means(c) = gauss(rng);
    const auto mine = project_class_values(means, cop.k2);
    const auto oracle = test::project_class_values_oracle(means, cop.k2);
    CHECK((mine - oracle).norm() <= 1e-8 * (1.0 + oracle.norm()));
    if (!cop.k2.chain_edges.empty()) ++dag_cases;
  }
  CHECK(dag_cases > 0);  // the sample must exercise chain constraints
}

TEST_CASE("projection handles a diamond of chain constraints") {
  // means fit a diamond DAG: 0 -> 1 -> 3, 0 -> 2 -> 3 (not a simple path)
  K2Structure k2;
  for (int c = 0; c < 4; ++c) {
    K2Structure::ClassInfo info;
    info.key = {c};
    info.weight = 1.0 + c;
    k2.classes.push_back(info);
  }
  k2.chain_edges = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
  Eigen::MatrixXi ids(1, 1);
  ids << 0;
  k2.entry_class.push_back(ids);

  std::mt19937_64 rng(31);
  std::normal_distribution<double> gauss(0.0, 1.5);
  for (int trial = 0; trial < 25; ++trial) {
    Eigen::VectorXd m(4);
    for (int c = 0; c < 4; ++c) m(c) = gauss(rng);
    Eigen::VectorXd w(4);
    for (int c = 0; c < 4; ++c) w(c) = k2.classes[static_cast<size_t>(c)].weight;
    const auto mine = project_class_values(m, k2);
    const auto oracle =
        test::project_classes_oracle(m, w, k2.chain_edges);
    CHECK((mine - oracle).norm() <= 1e-8 * (1.0 + oracle.norm()));
  }
}

TEST_CASE("polyhedral projection properties on random tuples") {
  std::mt19937_64 rng(41);
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    const auto cop = random_cop(seed);
    for (int trial = 0; trial < 25; ++trial) {
      const auto z = random_symmetric(cop.block_sizes(), rng, 2.0);
      const auto p = project_k2(z, cop.k2);
      CHECK((project_k2(p, cop.k2) - p).norm() <= 1e-9 * (1.0 + p.norm()));  // idempotent
      const auto z2 = random_symmetric(cop.block_sizes(), rng, 2.0);
      const auto p2 = project_k2(z2, cop.k2);
      CHECK((p - p2).norm() <= (z - z2).norm() + 1e-10);  // nonexpansive
      // Moreau identity and orthogonality for the polyhedral cone
      const auto d = project_k2_dual(-BlockSymMatrix(z), cop.k2);
      CHECK((z - (p - d)).norm() <= 1e-10 * (1.0 + z.norm()));
      CHECK(std::abs(p.inner(d)) <= 1e-10 * (1.0 + z.squared_norm()));
      // obtuse angle against random feasible points certifies optimality
      auto wm = collapse_to_classes(random_symmetric(cop.block_sizes(), rng, 2.0), cop.k2);
      const auto wfeas = expand_from_classes(project_class_values(wm, cop.k2), cop.k2);
      CHECK((z - p).inner(wfeas - p) <= 1e-8 * (1.0 + z.norm()) * (1.0 + wfeas.norm()));
    }
  }
}

TEST_CASE("moment tuples of feasible points lie in the polyhedral cone") {
  std::mt19937_64 rng(53);
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_real_distribution<double> box(0.0, 1.0);
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    const auto cop = random_cop(seed);
    std::vector<double> x(static_cast<size_t>(cop.part.n));
    for (int i = 0; i < cop.part.n; ++i)
      x[static_cast<size_t>(i)] = cop.part.binary(i) ? static_cast<double>(bit(rng)) : box(rng);
    for (const auto& g : cop.gammas)
      for (size_t i = 0; i < g.size(); ++i)
        if (g[i] >= 1) {
          x[i] = 0.0;  // satisfy each complementarity set
          break;
        }
    const auto z = moment_tuple(cop.bases, x);
    CHECK((project_k2(z, cop.k2) - z).norm() <= 1e-9 * (1.0 + z.norm()));
    CHECK(lambda_min(z) >= -1e-10);
  }
}
