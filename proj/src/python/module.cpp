#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "bbcpop/instances.hpp"
#include "bbcpop/relaxation.hpp"
#include "bbcpop/solver.hpp"
#include "bbcpop/sparsity.hpp"

namespace py = pybind11;

namespace {

std::string solve_pop(const bbcpop::PopInstance& pop, int omega, bool dense,
                      const std::string& rho_mode, double tol, double eps, double delta,
                      int k_max, double eta_r) {
  bbcpop::AssembleOptions aopts;
  aopts.omega = omega;
  aopts.dense = dense;
  aopts.rho_mode = rho_mode == "submodular" ? bbcpop::RhoMode::Submodular : bbcpop::RhoMode::Trivial;
  const bbcpop::DnnCop cop = bbcpop::assemble(pop, aopts);

  bbcpop::BpOptions bopts;
  bopts.tol = tol;
  bopts.apg.eps = eps;
  bopts.apg.delta = delta;
  bopts.apg.k_max = k_max;
  bopts.apg.eta_r = eta_r;

  const auto [y0_u, x_feas] = bbcpop::heuristic_upper_bound(pop);
  const bbcpop::BoundCertificate cert = bbcpop::bp_solve(cop, y0_u, bopts);

  nlohmann::json report;
  report["n"] = pop.part.n;
  report["omega"] = cop.omega;
  report["ell"] = cop.ell();
  report["block_sizes"] = cop.block_sizes();
  report["rho"] = cop.rho;
  report["LBv"] = cert.y0_vl;
  report["sec"] = cert.wall_time;
  report["apgit"] = cert.apg_total_iterations;
  report["bpit"] = cert.bp_iterations;
  report["term"] = cert.term_code;
  report["upper_bound_start"] = y0_u;
  return report.dump();
}

}  // namespace

PYBIND11_MODULE(_bbcpop, m) {
  m.doc() = "Certified lower bounds for binary/box/complementarity polynomial optimization";

  m.def(
      "generate_arrow",
      [](int a, int b, int c, int l, int d, bool binary, int comp_count, uint64_t seed) {
        const auto cover = bbcpop::arrow_cliques(a, b, c, l);
        const int n = bbcpop::arrow_variable_count(a, b, c, l);
        const auto part = binary ? bbcpop::IndexPartition::all_binary(n)
                                 : bbcpop::IndexPartition::all_box(n);
        return bbcpop::pop_to_json(bbcpop::gen_random_pop(cover, d, part, comp_count, seed));
      },
      py::arg("a"), py::arg("b"), py::arg("c"), py::arg("l"), py::arg("d") = 2,
      py::arg("binary") = true, py::arg("comp_count") = 0, py::arg("seed") = 1,
      "Random instance on arrow-shaped cliques; returns instance JSON.");

  m.def(
      "generate_chordal",
      [](int n, double range, int d, bool binary, int comp_count, uint64_t seed) {
        const auto cover = bbcpop::chordal_extend_and_cliques(
            bbcpop::chordal_random_pattern(n, range, seed));
        const auto part = binary ? bbcpop::IndexPartition::all_binary(n)
                                 : bbcpop::IndexPartition::all_box(n);
        return bbcpop::pop_to_json(bbcpop::gen_random_pop(cover, d, part, comp_count, seed));
      },
      py::arg("n"), py::arg("range") = 0.4, py::arg("d") = 2, py::arg("binary") = true,
      py::arg("comp_count") = 0, py::arg("seed") = 1,
      "Random instance on a unit-disk chordal cover; returns instance JSON.");

  m.def(
      "solve_instance",
      [](const std::string& instance_json, int omega, bool dense, const std::string& rho_mode,
         double tol, double eps, double delta, int k_max, double eta_r) {
        return solve_pop(bbcpop::pop_from_json(instance_json), omega, dense, rho_mode, tol, eps,
                         delta, k_max, eta_r);
      },
      py::arg("instance_json"), py::arg("omega") = -1, py::arg("dense") = false,
      py::arg("rho_mode") = "trivial", py::arg("tol") = 1e-5, py::arg("eps") = 1e-13,
      py::arg("delta") = 1e-6, py::arg("k_max") = 20000, py::arg("eta_r") = 1.1,
      "Solve an instance JSON; returns a report JSON with the certified bound LBv.");

  m.def(
      "solve_qap",
      [](const std::string& path, double lambda, const std::string& rho_mode, double tol,
         double eps, double delta, int k_max, double eta_r) {
        return solve_pop(bbcpop::qap_to_pop(bbcpop::load_qaplib(path), lambda), -1, false,
                         rho_mode, tol, eps, delta, k_max, eta_r);
      },
      py::arg("path"), py::arg("lambda") = 1e5, py::arg("rho_mode") = "trivial",
      py::arg("tol") = 1e-5, py::arg("eps") = 1e-13,
      py::arg("delta") = 1e-6, py::arg("k_max") = 20000, py::arg("eta_r") = 1.1,
      "Solve a QAPLIB file; returns a report JSON with the certified bound LBv.");

  m.def(
      "brute_force",
      [](const std::string& instance_json, int grid_per_box) {
        const auto res =
            bbcpop::brute_force_optimum(bbcpop::pop_from_json(instance_json), grid_per_box);
        return py::make_tuple(res.value, res.exact);
      },
      py::arg("instance_json"), py::arg("grid_per_box") = 2,
      "Exhaustive minimum (exact for pure-binary instances); returns (value, exact).");
}
