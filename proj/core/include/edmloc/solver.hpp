#pragma once

#include <vector>

#include "edmloc/angle_bounds.hpp"
#include "edmloc/edm.hpp"
#include "edmloc/measurement.hpp"

// Majorization-penalty solver for the box-constrained EDM model. Each
// iteration projects -D^k onto the rank-3 cut of the conditional PSD
// cone and minimizes the resulting separable surrogate per free entry:
// a clamped linear-quadratic blend for the least-squares loss, and a
// clamped depressed-cubic root for the smoothed robust loss.

namespace edmloc {

// Entry-wise box [L, U]. Only the (i, n) entries for receivers i = 2..m
// are free; the anchor block, the transmitter entry (1, n) = b^2 and the
// diagonal are pinned (L = U there).
struct BoxConstraint {
    SymMatrix lower;
    SymMatrix upper;

    int order() const { return lower.order(); }
    bool is_free(int i, int j) const;
};

BoxConstraint build_box(const Eigen::MatrixXd& anchor_block, double b_km,
                        const BoundsPair& bounds);

// Ablation bounds that discard the angle information: l'_i = 0,
// u'_i = max_ij Delta_ij.
BoundsPair relaxed_box(const Eigen::MatrixXd& big_delta);

struct SolverConfig {
    int p = 1;                   // 1 = robust loss, 2 = least squares
    double rho = -1.0;           // penalty; <= 0 means "use n at solve time"
    double epsilon = 0.1;        // l1 smoothing
    int r = 3;                   // embedding dimension
    int max_iter = 2000;
    double fprog_tol = -1.0;     // <= 0 means 5*sqrt(n)*1e-4 at solve time
    double kprog_tol = 1e-3;
    std::vector<double> alpha_set = {1.0, 0.5, 0.0};  // multi-start weights, in order
    // Relative slack of the multi-start beam-acceptance test. The
    // estimate is only converged to kprog_tol, so the closed angle
    // constraints are tested with a matching tolerance instead of at
    // machine precision.
    double beam_accept_tol = 1e-4;

    double effective_rho(int n) const { return rho > 0.0 ? rho : static_cast<double>(n); }
    double effective_fprog_tol(int n) const {
        return fprog_tol > 0.0 ? fprog_tol : 5.0 * std::sqrt(static_cast<double>(n)) * 1e-4;
    }
};

struct SolveResult {
    SymMatrix d_hat;
    Vec3 x_hat;
    int iterations = 0;
    std::vector<double> objective_trace;  // penalized objective per iterate
    double eigenratio = 0.0;
    int init_index = 0;
    bool beam_feasible = false;
    bool exhausted_max_iter = false;
    double wall_time_s = 0.0;
};

// Largest nonnegative real root of t^3 - a t - c = 0 (c >= 0), i.e. the
// stationary point of the per-entry robust surrogate in t = sqrt(d).
// Closed form (Cardano / trigonometric) polished by Newton steps.
double dcroot(double a, double c);

// One least-squares step: free entries of (Delta - rho * Pi(-D^k))/(rho+1)
// clamped into the box; pinned entries restored.
SymMatrix step_p2(const SymMatrix& d_k, const Eigen::MatrixXd& big_delta,
                  const BoxConstraint& box, double rho, int r);

// One robust step: reweighted smoothed-l1 surrogate solved per entry by
// dcroot in t = sqrt(d); the squared root is clamped into the box.
SymMatrix step_p1(const SymMatrix& d_k, const Eigen::MatrixXd& big_delta,
                  const BoxConstraint& box, double rho, double epsilon, int r);

// Phi_p(D) = F_p(D) + rho * g(D), with the data term restricted to the
// free entries. This is the quantity the iteration decreases and the one
// the Fprog stopping rule is evaluated on.
double penalized_objective(const SymMatrix& d, const Eigen::MatrixXd& big_delta, int p,
                           double rho, double epsilon, int r);

// Relative objective progress (prev - curr) / (1 + prev).
double fprog(double prev, double curr);

// 1 - sum_{i<=3} max(lambda_i, 0)^2 / sum_i lambda_i^2 over the spectrum
// of -J D J; zero for the zero matrix.
double kprog(const SymMatrix& d);

// Run the majorization-penalty iteration from d0 until both stopping
// rules hold (or max_iter), then embed, align the anchors by Procrustes
// and read off the source estimate.
SolveResult solve(const SolverConfig& config, const SymMatrix& d0,
                  const Eigen::MatrixXd& big_delta, const BoxConstraint& box,
                  const Anchors& anchors, const Beam& beam);

// Deterministic multi-start: initializations [Delta, then alpha*L +
// (1-alpha)*U for alpha in alpha_set], each with the pinned entries
// restored. Returns the first result whose estimate passes the beam
// acceptance test; otherwise the final result with beam_feasible=false.
SolveResult multistart_solve(const SolverConfig& config, const MeasurementSet& meas,
                             const BoxConstraint& box, const Anchors& anchors,
                             const Beam& beam);

}  // namespace edmloc
