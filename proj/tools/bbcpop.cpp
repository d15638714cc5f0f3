#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <string>

#include "bbcpop/cones.hpp"
#include "bbcpop/instances.hpp"
#include "bbcpop/relaxation.hpp"
#include "bbcpop/rhobound.hpp"
#include "bbcpop/solver.hpp"
#include "bbcpop/sparsity.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct SolveParams {
  int omega = -1;
  bool dense = false;
  std::string rho_mode = "trivial";
  double tol = 1e-5;
  double eps = 1e-13;
  double delta = 1e-6;
  int k_max = 20000;
  double eta_r = 1.1;
  double L_init = 0.8;
  bool no_restarts = false;
  bool no_heuristic = false;
  bool verbose = false;
  std::string out_path;
  std::string csv_path;
};

void add_solve_flags(CLI::App* cmd, SolveParams& sp) {
  cmd->add_option("--omega", sp.omega, "relaxation order (default: ceil(d/2))");
  cmd->add_flag("--dense", sp.dense, "use the single dense clique instead of a chordal cover");
  cmd->add_option("--rho", sp.rho_mode, "trace bound mode")
      ->check(CLI::IsMember({"trivial", "submodular"}));
  cmd->add_option("--tol", sp.tol, "bisection bracket tolerance");
  cmd->add_option("--eps", sp.eps, "feasibility threshold on ||X||");
  cmd->add_option("--delta", sp.delta, "KKT-error threshold");
  cmd->add_option("--kmax", sp.k_max, "iteration cap of the feasibility test");
  cmd->add_option("--eta-r", sp.eta_r, "step-constant growth factor on restart");
  cmd->add_option("--L-init", sp.L_init, "initial step constant");
  cmd->add_flag("--no-restarts", sp.no_restarts, "plain accelerated iteration with L=1");
  cmd->add_flag("--no-heuristic", sp.no_heuristic, "disable the early infeasibility stop");
  cmd->add_flag("-v,--verbose", sp.verbose, "log each bisection iteration");
  cmd->add_option("-o,--out", sp.out_path, "write the report JSON to this path");
  cmd->add_option("--csv", sp.csv_path, "append a CSV report row to this path");
}

int run_solve(const bbcpop::PopInstance& pop, const std::string& name, const SolveParams& sp) {
  bbcpop::AssembleOptions aopts;
  aopts.omega = sp.omega;
  aopts.dense = sp.dense;
  aopts.rho_mode =
      sp.rho_mode == "submodular" ? bbcpop::RhoMode::Submodular : bbcpop::RhoMode::Trivial;
  const bbcpop::DnnCop cop = bbcpop::assemble(pop, aopts);

  bbcpop::BpOptions bopts;
  bopts.tol = sp.tol;
  bopts.apg.eps = sp.eps;
  bopts.apg.delta = sp.delta;
  bopts.apg.k_max = sp.k_max;
  bopts.apg.eta_r = sp.eta_r;
  bopts.apg.L_init = sp.L_init;
  bopts.apg.restarts = !sp.no_restarts;
  bopts.apg.heuristic = !sp.no_heuristic;

  const auto [y0_u, x_feas] = bbcpop::heuristic_upper_bound(pop);
  bbcpop::ProgressCallback cb = nullptr;
  if (sp.verbose)
    cb = [](const bbcpop::BpIterRecord& r) {
      std::fprintf(stderr, "bp %3d  mid=%+.8e  verdict=%d  |X|=%.3e  g=%.3e  apg=%d  [%.8e, %.8e]\n",
                   r.iteration, r.y0_m, static_cast<int>(r.verdict), r.x_norm, r.g,
                   r.apg_iterations, r.y0_l, r.y0_u);
    };
  const bbcpop::BoundCertificate cert = bbcpop::bp_solve(cop, y0_u, bopts, cb);

  const int d = bbcpop::canonicalize_objective(pop.f0, pop.part).max_total_degree();
  nlohmann::json report;
  report["instance"] = name;
  report["n"] = pop.part.n;
  report["d"] = d;
  report["omega"] = cop.omega;
  report["ell"] = cop.ell();
  report["block_sizes"] = cop.block_sizes();
  report["rho"] = cop.rho;
  report["LBv"] = cert.y0_vl;
  report["sec"] = cert.wall_time;
  report["apgit"] = cert.apg_total_iterations;
  report["bpit"] = cert.bp_iterations;
  report["term"] = cert.term_code;
  report["bracket"] = {cert.y0_l, cert.y0_u};
  report["upper_bound_start"] = y0_u;
  report["config"] = {{"omega", cop.omega},       {"dense", sp.dense},
                      {"rho_mode", sp.rho_mode},  {"tol", sp.tol},
                      {"eps", sp.eps},            {"delta", sp.delta},
                      {"kmax", sp.k_max},         {"eta_r", sp.eta_r},
                      {"L_init", sp.L_init},      {"restarts", !sp.no_restarts},
                      {"heuristic", !sp.no_heuristic}};

  const std::string text = report.dump(2);
  if (!sp.out_path.empty()) {
    std::ofstream out(sp.out_path);
    if (!out) {
      std::fprintf(stderr, "error: cannot write %s\n", sp.out_path.c_str());
      return kExitInput;
    }
    out << text << "\n";
  }
  std::cout << text << "\n";

  if (!sp.csv_path.empty()) {
    const bool fresh = !std::ifstream(sp.csv_path).good();
    std::ofstream csv(sp.csv_path, std::ios::app);
    if (!csv) {
      std::fprintf(stderr, "error: cannot write %s\n", sp.csv_path.c_str());
      return kExitInput;
    }
    if (fresh) csv << "instance,d,n,ell,LBv,sec,apgit,bpit,term\n";
    csv << name << "," << d << "," << pop.part.n << "," << cop.ell() << "," << cert.y0_vl << ","
        << cert.wall_time << "," << cert.apg_total_iterations << "," << cert.bp_iterations << ","
        << cert.term_code << "\n";
  }
  return kExitOk;
}

int run_check(const bbcpop::PopInstance& pop) {
  bool ok = true;
  auto verdict = [&](const std::string& what, bool pass) {
    std::cout << (pass ? "PASS" : "FAIL") << "  " << what << "\n";
    ok = ok && pass;
  };

  const bbcpop::DnnCop cop = bbcpop::assemble(pop, {});
  const bbcpop::Polynomial f0 = bbcpop::canonicalize_objective(pop.f0, pop.part);

  // Lifting identity at random feasible binary points.
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> bit(0, 1);
  bool lift_ok = true;
  for (int trial = 0; trial < 32 && lift_ok; ++trial) {
    std::vector<double> x(static_cast<size_t>(pop.part.n), 0.0);
    for (auto& v : x) v = static_cast<double>(bit(rng));
    for (const auto& set : pop.comp.sets) x[static_cast<size_t>(set.front())] = 0.0;
    const bbcpop::BlockSymMatrix Z = bbcpop::moment_tuple(cop.bases, x);
    lift_ok = std::abs(cop.F0.inner(Z) - f0.eval(x)) <= 1e-9 * (1.0 + std::abs(f0.eval(x)));
    if (lift_ok) {  // moment tuples of feasible points belong to K2
      const bbcpop::BlockSymMatrix P = bbcpop::project_k2(Z, cop.k2);
      lift_ok = (P - Z).norm() <= 1e-9 * (1.0 + Z.norm());
    }
  }
  verdict("lifted objective matches f0 on feasible points, moment tuples lie in the cone", lift_ok);

  // Projection sanity on a random tuple.
  std::normal_distribution<double> gauss(0.0, 1.0);
  bbcpop::BlockSymMatrix Z(cop.block_sizes());
  for (auto& b : Z.blocks)
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j <= i; ++j) b(i, j) = b(j, i) = gauss(rng);
  const bbcpop::BlockSymMatrix P = bbcpop::project_k2(Z, cop.k2);
  verdict("polyhedral projection is idempotent",
          (bbcpop::project_k2(P, cop.k2) - P).norm() <= 1e-9 * (1.0 + P.norm()));
  const bbcpop::BlockSymMatrix D = bbcpop::project_k2_dual(-Z, cop.k2);
  verdict("Moreau decomposition holds", (Z - (P - D)).norm() <= 1e-9 * (1.0 + Z.norm()));

  std::cout << (ok ? "all checks passed" : "checks failed") << "\n";
  return ok ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified lower bounds for binary/box/complementarity polynomial optimization"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a random instance JSON");
  std::string kind = "arrow", gen_out;
  int ga = 5, gb = 2, gc = 2, gl = 3, gn = 13, gd = 2, gcomp = -1;
  double grange = 0.4;
  uint64_t gseed = 1;
  bool gbox = false;
  gen->add_option("--kind", kind, "sparsity family")->check(CLI::IsMember({"arrow", "chordal"}));
  gen->add_option("--a", ga, "arrow: band width");
  gen->add_option("--b", gb, "arrow: band overlap");
  gen->add_option("--c", gc, "arrow: tail width");
  gen->add_option("--l", gl, "arrow: number of bands");
  gen->add_option("--n", gn, "chordal: number of variables");
  gen->add_option("--range", grange, "chordal: disk radius");
  gen->add_option("-d,--degree", gd, "objective degree");
  gen->add_option("--comp", gcomp, "number of complementarity pairs (default 2n)");
  gen->add_flag("--box", gbox, "box variables instead of binary");
  gen->add_option("--seed", gseed, "PRNG seed");
  gen->add_option("out", gen_out, "output path")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "solve an instance JSON");
  std::string solve_in;
  SolveParams ssp;
  solve->add_option("in", solve_in, "instance JSON path")->required();
  add_solve_flags(solve, ssp);

  // qap
  auto* qap = app.add_subcommand("qap", "solve a QAPLIB instance");
  std::string qap_in;
  double qlambda = 1e5;
  SolveParams qsp;
  qap->add_option("in", qap_in, "QAPLIB data file")->required();
  qap->add_option("--lambda", qlambda, "penalty parameter");
  add_solve_flags(qap, qsp);

  // check
  auto* check = app.add_subcommand("check", "run invariant diagnostics on an instance");
  std::string check_in;
  check->add_option("in", check_in, "instance JSON path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      bbcpop::CliqueCover cover;
      int n = 0;
      if (kind == "arrow") {
        cover = bbcpop::arrow_cliques(ga, gb, gc, gl);
        n = bbcpop::arrow_variable_count(ga, gb, gc, gl);
      } else {
        cover = bbcpop::chordal_extend_and_cliques(bbcpop::chordal_random_pattern(gn, grange, gseed));
        n = gn;
      }
      const auto part =
          gbox ? bbcpop::IndexPartition::all_box(n) : bbcpop::IndexPartition::all_binary(n);
      const int comp = gcomp < 0 ? 2 * n : gcomp;
      bbcpop::PopInstance pop = bbcpop::gen_random_pop(cover, gd, part, comp, gseed);
      bbcpop::save_instance(pop, gen_out);
      std::cout << "wrote " << gen_out << " (n=" << n << ", cliques=" << cover.size() << ")\n";
      return kExitOk;
    }
    if (solve->parsed()) return run_solve(bbcpop::load_instance(solve_in), solve_in, ssp);
    if (qap->parsed())
      return run_solve(bbcpop::qap_to_pop(bbcpop::load_qaplib(qap_in), qlambda), qap_in, qsp);
    if (check->parsed()) return run_check(bbcpop::load_instance(check_in));
  } catch (const bbcpop::ParseError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitInput;
  } catch (const bbcpop::CoverageError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitOk;
}
