#include "bbcpop/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bbcpop/cones.hpp"

namespace bbcpop {

void ApgParams::validate() const {
  if (!(eps > 0.0) || !(delta > 0.0) || k_max <= 0 || !(eta_r > 1.0) || !(L_init > 0.0) ||
      !(L_init <= 1.0))
    throw std::invalid_argument("invalid feasibility-test parameters");
}

double kkt_error(const BlockSymMatrix& X, const BlockSymMatrix& Y1, const BlockSymMatrix& Y2,
                 const K2Structure& k2) {
  const double nx = X.norm();
  const double t1 = std::abs(X.inner(Y1)) / (1.0 + nx + Y1.norm());
  const double t2 = std::abs(X.inner(Y2)) / (1.0 + nx + Y2.norm());
  // At a KKT point -X lies in K1 and K2; the dual-cone projections of X
  // measure exactly those two distances (Moreau).
  const double t3 = project_psd_product_dual(X).norm() / (1.0 + nx);
  const double t4 = project_k2_dual(X, k2).norm() / (1.0 + nx);
  return std::max(std::max(t1, t2), std::max(t3, t4));
}

bool heuristic_stop(const std::vector<double>& g_hist, const std::vector<double>& x_hist,
                    double delta) {
  const size_t k = g_hist.size();
  if (k <= 31 || k < 40 || x_hist.size() != k) return false;
  const double g = g_hist.back();
  const double x = x_hist.back();
  if (g <= 0.0 || x / g < 1e4 || g > std::sqrt(delta)) return false;

  double log_mg = 0.0, log_mx = 0.0;
  for (size_t i = 0; i < 10; ++i) {
    const size_t a = k - 1 - i, b = k - 1 - i - 30;
    if (g_hist[b] <= 0.0 || x_hist[b] <= 0.0) return false;
    log_mg += std::log(g_hist[a] / g_hist[b]);
    log_mx += std::log(x_hist[a] / x_hist[b]);
  }
  const double mg = std::exp(log_mg / 10.0);
  const double mx = std::exp(log_mx / 10.0);
  return mg >= 0.95 && mx >= 0.995;
}

FeasibilityOutcome apgr_feasibility(const BlockSymMatrix& G, const BlockSymMatrix& Y1_init,
                                    const K2Structure& k2, const ApgParams& params) {
  params.validate();

  FeasibilityOutcome out;
  BlockSymMatrix Y1_prev = Y1_init;   // Y1^{k-1}
  BlockSymMatrix Ybar = Y1_init;      // Ybar^k
  double t = 1.0;
  double L = params.restarts ? params.L_init : 1.0;
  long K_i = 2;
  int k_re = 0;
  double x_norm_prev = std::numeric_limits<double>::infinity();
  std::vector<double> g_hist, x_hist;

  for (int k = 1; k <= params.k_max; ++k) {
    BlockSymMatrix W = Ybar;
    W -= G;
    BlockSymMatrix step = project_k2(W, k2);
    step *= 1.0 / L;
    BlockSymMatrix Y1 = Ybar;
    Y1 -= step;
    Y1 = project_psd_product(Y1);

    BlockSymMatrix GmY1 = G;
    GmY1 -= Y1;
    BlockSymMatrix Y2 = project_k2_dual(GmY1, k2);
    BlockSymMatrix X = GmY1;
    X -= Y2;

    const double x_norm = X.norm();
    const double g = kkt_error(X, Y1, Y2, k2);
    out.iterations = k;

    if (x_norm < params.eps || g < params.delta) {
      out.verdict = x_norm < params.eps ? Verdict::Feasible : Verdict::Infeasible;
      out.X = std::move(X);
      out.Y1 = std::move(Y1);
      out.Y2 = std::move(Y2);
      out.final_g = g;
      out.final_x_norm = x_norm;
      return out;
    }

    if (params.heuristic) {
      g_hist.push_back(g);
      x_hist.push_back(x_norm);
      if (k > 30 && heuristic_stop(g_hist, x_hist, params.delta)) {
        out.verdict = Verdict::Infeasible;
        out.heuristic_fired = true;
        out.X = std::move(X);
        out.Y1 = std::move(Y1);
        out.Y2 = std::move(Y2);
        out.final_g = g;
        out.final_x_norm = x_norm;
        return out;
      }
    }

    const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
    BlockSymMatrix momentum = Y1;
    momentum -= Y1_prev;
    momentum *= (t - 1.0) / t_next;
    Ybar = Y1;
    Ybar += momentum;
    t = t_next;

    if (params.restarts && x_norm > x_norm_prev && k > K_i + k_re) {
      t = 1.0;
      Ybar = Y1;
      k_re = k;
      K_i *= 2;
      L *= params.eta_r;
    }

    Y1_prev = std::move(Y1);
    x_norm_prev = x_norm;

    if (k == params.k_max) {
      out.verdict = Verdict::Undecided;
      out.X = std::move(X);
      out.Y1 = Y1_prev;
      out.Y2 = std::move(Y2);
      out.final_g = g;
      out.final_x_norm = x_norm;
    }
  }
  return out;
}

double certified_bound(const DnnCop& cop, double y0_m, const BlockSymMatrix& Y2_hat) {
  BlockSymMatrix shifted = cop.dual_matrix(y0_m);
  shifted -= Y2_hat;
  return y0_m + cop.rho * std::min(0.0, lambda_min(shifted));
}

BoundCertificate bp_solve(const DnnCop& cop, double y0_u, const BpOptions& opts,
                          const ProgressCallback& cb) {
  if (!std::isfinite(y0_u)) throw std::invalid_argument("initial upper bound must be finite");
  const auto start = std::chrono::steady_clock::now();

  BoundCertificate cert;
  double y0_l = -std::numeric_limits<double>::infinity();
  double y0_m = y0_u;
  double y0_vl = -std::numeric_limits<double>::infinity();
  BlockSymMatrix Y1_hat = project_psd_product(cop.dual_matrix(y0_m));
  Verdict last_verdict = Verdict::Undecided;
  double prev_improvement = std::numeric_limits<double>::infinity();
  bool stalled = false;

  int iter = 0;
  while (!(std::isfinite(y0_l) &&
           y0_u - y0_l <= opts.tol * (1.0 + std::abs(y0_u))) &&
         iter < opts.max_iterations) {
    ++iter;
    const BlockSymMatrix G = cop.dual_matrix(y0_m);
    FeasibilityOutcome fo = apgr_feasibility(G, Y1_hat, cop.k2, opts.apg);
    cert.apg_total_iterations += fo.iterations;
    Y1_hat = fo.Y1;
    last_verdict = fo.verdict;

    BlockSymMatrix shifted = G;
    shifted -= fo.Y2;
    const double mu = std::min(0.0, lambda_min(shifted));
    const double candidate = y0_m + cop.rho * mu;
    const double improvement =
        std::isfinite(y0_vl) ? std::max(0.0, candidate - y0_vl)
                             : std::numeric_limits<double>::infinity();
    if (candidate > y0_vl) {
      y0_vl = candidate;
      cert.y0_witness = y0_m;
      cert.mu_witness = mu;
      cert.Y2_witness = fo.Y2;
    }

    if (fo.verdict == Verdict::Feasible) {
      y0_l = y0_m;
    } else {  // Infeasible and Undecided both shrink from above (conservative)
      y0_u = y0_m;
      y0_l = std::max(y0_l, y0_vl);
    }
    y0_m = (y0_l + y0_u) / 2.0;

    if (cb) cb({iter, y0_m, fo.verdict, fo.final_x_norm, fo.final_g, fo.iterations, y0_vl, y0_l, y0_u});

    // Stall: two successive certified-bound improvements below the tolerance.
    const double stall_eps = opts.tol * (1.0 + std::abs(std::isfinite(y0_vl) ? y0_vl : 0.0));
    if (iter >= opts.min_iterations_before_stall && improvement < stall_eps &&
        prev_improvement < stall_eps) {
      stalled = true;
      break;
    }
    prev_improvement = improvement;
  }

  cert.y0_vl = y0_vl;
  cert.y0_l = y0_l;
  cert.y0_u = y0_u;
  cert.bp_iterations = iter;
  if (!stalled && std::isfinite(y0_l) && y0_u - y0_l <= opts.tol * (1.0 + std::abs(y0_u)))
    cert.term_code = last_verdict == Verdict::Feasible ? 1 : 2;
  else
    cert.term_code = 3;
  cert.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return cert;
}

}  // namespace bbcpop
