#pragma once

#include <functional>
#include <vector>

#include "bbcpop/block_matrix.hpp"
#include "bbcpop/relaxation.hpp"

namespace bbcpop {

struct ApgParams {
  double eps = 1e-13;    // ||X|| feasibility threshold
  double delta = 1e-6;   // KKT-error threshold
  int k_max = 20000;
  double eta_r = 1.1;    // step-constant growth on restart
  double L_init = 0.8;
  bool restarts = true;  // false: plain accelerated iteration with L = 1
  bool heuristic = true; // early infeasibility stop from window statistics

  void validate() const;
};

enum class Verdict { Feasible, Infeasible, Undecided };

struct FeasibilityOutcome {
  Verdict verdict = Verdict::Undecided;
  BlockSymMatrix X, Y1, Y2;
  int iterations = 0;
  double final_g = 0.0;
  double final_x_norm = 0.0;
  bool heuristic_fired = false;
};

/// Scaled KKT residual: max of the two normalized complementarity products
/// <X,Yi> and the distances of -X to K1 and K2 (norms of the dual-cone
/// projections of X), all of which vanish at an optimum even when X != 0.
double kkt_error(const BlockSymMatrix& X, const BlockSymMatrix& Y1, const BlockSymMatrix& Y2,
                 const K2Structure& k2);

/// Window statistics test on the iteration history: true when the KKT error
/// is small, ||X||/g is large, and both sequences have stalled (10-term
/// geometric means of 30-apart ratios near 1).
bool heuristic_stop(const std::vector<double>& g_hist, const std::vector<double>& x_hist,
                    double delta);

/// Accelerated proximal gradient feasibility test for G in K1* + K2*, with
/// adaptive restarts. Feasible: ||X|| < eps. Infeasible: KKT error < delta
/// with ||X|| >= eps, or the heuristic stop fired. Undecided: k_max reached.
FeasibilityOutcome apgr_feasibility(const BlockSymMatrix& G, const BlockSymMatrix& Y1_init,
                                    const K2Structure& k2, const ApgParams& params);

/// Valid lower bound from any trial point: y0 + rho * min(0, lambda_min(G(y0) - Y2_hat)),
/// where Y2_hat must lie in K2*.
double certified_bound(const DnnCop& cop, double y0_m, const BlockSymMatrix& Y2_hat);

struct BpOptions {
  ApgParams apg;
  double tol = 1e-5;  // relative bracket tolerance: stop at y0_u - y0_l <= tol*(1+|y0_u|)
  int max_iterations = 200;
  int min_iterations_before_stall = 10;
};

struct BpIterRecord {
  int iteration = 0;
  double y0_m = 0.0;
  Verdict verdict = Verdict::Undecided;
  double x_norm = 0.0;
  double g = 0.0;
  int apg_iterations = 0;
  double y0_vl = 0.0, y0_l = 0.0, y0_u = 0.0;
};
using ProgressCallback = std::function<void(const BpIterRecord&)>;

struct BoundCertificate {
  double y0_vl = 0.0;            // best certified lower bound
  double y0_l = 0.0, y0_u = 0.0; // final bracket
  int bp_iterations = 0;
  int apg_total_iterations = 0;
  int term_code = 0;  // 1: closed, last verdict feasible; 2: closed via infeasible; 3: stalled
  double wall_time = 0.0;
  // Dual witness behind y0_vl: G(y0_witness) - Y2_witness - mu_witness*I in K1*.
  double y0_witness = 0.0;
  double mu_witness = 0.0;
  BlockSymMatrix Y2_witness;
};

/// Bisection on y0 with certified bounds. y0_u must be a finite upper bound on
/// the dual optimum (e.g. the objective at any feasible point of the POP).
BoundCertificate bp_solve(const DnnCop& cop, double y0_u, const BpOptions& opts = {},
                          const ProgressCallback& cb = nullptr);

}  // namespace bbcpop
