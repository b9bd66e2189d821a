#include "edmloc/solver.hpp"

#include <chrono>
#include <cmath>

namespace edmloc {

bool BoxConstraint::is_free(int i, int j) const {
    const int n = order();
    const int lo = std::min(i, j), hi = std::max(i, j);
    return hi == n - 1 && lo >= 1 && lo <= n - 2;
}

BoxConstraint build_box(const Eigen::MatrixXd& anchor_block, double b_km,
                        const BoundsPair& bounds) {
    const int m = static_cast<int>(anchor_block.rows());
    if (anchor_block.cols() != m || bounds.l.size() != m - 1 || bounds.u.size() != m - 1) {
        throw std::invalid_argument("build_box: inconsistent dimensions");
    }
    const int n = m + 1;
    Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(n, n);
    lower.topLeftCorner(m, m) = anchor_block;
    lower(0, n - 1) = lower(n - 1, 0) = b_km * b_km;
    Eigen::MatrixXd upper = lower;
    for (int i = 1; i < m; ++i) {
        lower(i, n - 1) = lower(n - 1, i) = bounds.l(i - 1);
        upper(i, n - 1) = upper(n - 1, i) = bounds.u(i - 1);
    }
    return BoxConstraint{SymMatrix(lower), SymMatrix(upper)};
}

BoundsPair relaxed_box(const Eigen::MatrixXd& big_delta) {
    const int n = static_cast<int>(big_delta.rows());
    const int m = n - 1;
    BoundsPair out;
    out.l = Eigen::VectorXd::Zero(m - 1);
    out.u = Eigen::VectorXd::Constant(m - 1, big_delta.maxCoeff());
    return out;
}

double dcroot(double a, double c) {
    if (c < 0.0) {
        throw std::invalid_argument("dcroot requires c >= 0");
    }
    if (c == 0.0) {
        return a > 0.0 ? std::sqrt(a) : 0.0;
    }
    // Largest real root of t^3 - a t - c; unique positive root for c > 0.
    double t;
    const double disc = 0.25 * c * c - a * a * a / 27.0;
    if (disc >= 0.0) {
        const double u = std::cbrt(0.5 * c + std::sqrt(disc));
        t = u + a / (3.0 * u);
    } else {
        // Three real roots (a > 0); the largest is the k = 0 branch.
        const double s = std::sqrt(a / 3.0);
        const double arg = std::clamp(0.5 * c / (s * s * s), -1.0, 1.0);
        t = 2.0 * s * std::cos(std::acos(arg) / 3.0);
    }
    for (int it = 0; it < 4; ++it) {
        const double f = t * t * t - a * t - c;
        const double fp = 3.0 * t * t - a;
        if (std::abs(fp) < 1e-300) break;
        const double step = f / fp;
        t -= step;
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(t))) break;
    }
    return std::max(t, 0.0);
}

namespace {

SymMatrix pin_fixed_entries(const SymMatrix& d, const BoxConstraint& box) {
    const int n = box.order();
    SymMatrix out = d;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            if (!box.is_free(i, j)) {
                out.set(i, j, box.lower(i, j));
            }
        }
    }
    return out;
}

SymMatrix step_p2_with(const SymMatrix&, const ConeProjection& proj,
                       const Eigen::MatrixXd& big_delta, const BoxConstraint& box,
                       double rho) {
    const int n = box.order();
    SymMatrix out = box.lower;
    for (int i = 1; i < n - 1; ++i) {
        const double cand =
            (big_delta(i, n - 1) - rho * proj.projected(i, n - 1)) / (rho + 1.0);
        out.set(i, n - 1, std::clamp(cand, box.lower(i, n - 1), box.upper(i, n - 1)));
    }
    return out;
}

SymMatrix step_p1_with(const SymMatrix& d_k, const ConeProjection& proj,
                       const Eigen::MatrixXd& big_delta, const BoxConstraint& box,
                       double rho, double epsilon) {
    const int n = box.order();
    SymMatrix out = box.lower;
    for (int i = 1; i < n - 1; ++i) {
        const double delta = std::sqrt(big_delta(i, n - 1));
        const double resid = std::sqrt(std::max(d_k(i, n - 1), 0.0)) - delta;
        const double w = 1.0 / (2.0 * std::sqrt(resid * resid + epsilon));
        const double a = -proj.projected(i, n - 1) - w / (2.0 * rho);
        const double c = w * delta / (2.0 * rho);
        const double t = dcroot(a, c);
        out.set(i, n - 1, std::clamp(t * t, box.lower(i, n - 1), box.upper(i, n - 1)));
    }
    return out;
}

double data_term(const SymMatrix& d, const Eigen::MatrixXd& big_delta, int p,
                 double epsilon) {
    const int n = d.order();
    double f = 0.0;
    for (int i = 1; i < n - 1; ++i) {
        if (p == 2) {
            const double r = d(i, n - 1) - big_delta(i, n - 1);
            f += r * r;
        } else {
            const double resid =
                std::sqrt(std::max(d(i, n - 1), 0.0)) - std::sqrt(big_delta(i, n - 1));
            f += std::sqrt(resid * resid + epsilon);
        }
    }
    return f;
}

double kprog_from_spectrum(const Eigen::VectorXd& lambda) {
    const double den = lambda.squaredNorm();
    if (den == 0.0) {
        return 0.0;
    }
    double num = 0.0;
    for (int k = 0; k < std::min<int>(3, lambda.size()); ++k) {
        num += std::pow(std::max(lambda(k), 0.0), 2);
    }
    return 1.0 - num / den;
}

}  // namespace

SymMatrix step_p2(const SymMatrix& d_k, const Eigen::MatrixXd& big_delta,
                  const BoxConstraint& box, double rho, int r) {
    const ConeProjection proj = project_kplus_r(SymMatrix(-d_k.mat()), r);
    return step_p2_with(d_k, proj, big_delta, box, rho);
}

SymMatrix step_p1(const SymMatrix& d_k, const Eigen::MatrixXd& big_delta,
                  const BoxConstraint& box, double rho, double epsilon, int r) {
    const ConeProjection proj = project_kplus_r(SymMatrix(-d_k.mat()), r);
    return step_p1_with(d_k, proj, big_delta, box, rho, epsilon);
}

double penalized_objective(const SymMatrix& d, const Eigen::MatrixXd& big_delta, int p,
                           double rho, double epsilon, int r) {
    return data_term(d, big_delta, p, epsilon) + rho * g_value(d, r);
}

double fprog(double prev, double curr) { return (prev - curr) / (1.0 + prev); }

double kprog(const SymMatrix& d) {
    const ConeProjection proj = project_kplus_r(SymMatrix(-d.mat()), 1);
    return kprog_from_spectrum(proj.eigenvalues);
}

SolveResult solve(const SolverConfig& config, const SymMatrix& d0,
                  const Eigen::MatrixXd& big_delta, const BoxConstraint& box,
                  const Anchors& anchors, const Beam& beam) {
    if (config.p != 1 && config.p != 2) {
        throw std::invalid_argument("solver supports p = 1 or p = 2");
    }
    const auto t_start = std::chrono::steady_clock::now();
    const int n = box.order();
    const double rho = config.effective_rho(n);
    const double ftol = config.effective_fprog_tol(n);

    SolveResult res;
    SymMatrix d = pin_fixed_entries(d0, box);
    double phi_prev = 0.0;
    bool converged = false;

    for (int k = 1; k <= config.max_iter; ++k) {
        const ConeProjection proj = project_kplus_r(SymMatrix(-d.mat()), config.r);
        const double g = 0.5 * (d.mat() + proj.projected.mat()).squaredNorm();
        const double phi = data_term(d, big_delta, config.p, config.epsilon) + rho * g;
        res.objective_trace.push_back(phi);
        if (k > 1 && fprog(phi_prev, phi) <= ftol &&
            kprog_from_spectrum(proj.eigenvalues) <= config.kprog_tol) {
            converged = true;
            res.iterations = k - 1;
            break;
        }
        phi_prev = phi;
        d = (config.p == 2)
                ? step_p2_with(d, proj, big_delta, box, rho)
                : step_p1_with(d, proj, big_delta, box, rho, config.epsilon);
        res.iterations = k;
    }
    res.exhausted_max_iter = !converged;

    const Embedding emb = embed_r(d, config.r);
    const RigidMap map =
        procrustes_map(emb.points_km.leftCols(n - 1), anchors.positions());
    res.d_hat = std::move(d);
    res.x_hat = map.apply(emb.points_km.col(n - 1));
    res.eigenratio = edmloc::eigenratio(res.d_hat);
    res.beam_feasible = in_beam_with_margin(res.x_hat, beam, config.beam_accept_tol);
    res.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

SolveResult multistart_solve(const SolverConfig& config, const MeasurementSet& meas,
                             const BoxConstraint& box, const Anchors& anchors,
                             const Beam& beam) {
    const auto t_start = std::chrono::steady_clock::now();

    std::vector<SymMatrix> inits;
    inits.emplace_back(meas.big_delta);
    for (const double alpha : config.alpha_set) {
        inits.emplace_back(alpha * box.lower.mat() + (1.0 - alpha) * box.upper.mat());
    }

    SolveResult res;
    for (int idx = 0; idx < static_cast<int>(inits.size()); ++idx) {
        res = solve(config, inits[idx], meas.big_delta, box, anchors, beam);
        res.init_index = idx;
        if (res.beam_feasible) {
            break;
        }
    }
    res.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

}  // namespace edmloc
