#include "edmloc/angle_bounds.hpp"

#include <algorithm>
#include <cmath>

namespace edmloc {

namespace {

constexpr double kDenominatorTol = 1e-12;

double denom_scale(const Vec3& a) {
    return 1.0 + std::abs(a.x()) + std::abs(a.y()) + std::abs(a.z());
}

// Sign-condition outcome: min-only, max-only, or both on an exact tie.
bool holds_for(double expr, ExtremeMode mode) {
    if (expr == 0.0) return true;
    return mode == ExtremeMode::kMin ? expr < 0.0 : expr > 0.0;
}

}  // namespace

const char* case_label(CandidateCase c) {
    switch (c) {
        case CandidateCase::kInterior: return "1";
        case CandidateCase::kEdgeV1Lo: return "2.1";
        case CandidateCase::kEdgeV1Hi: return "2.2";
        case CandidateCase::kEdgeV2Lo: return "2.3";
        case CandidateCase::kEdgeV2Hi: return "2.4";
        case CandidateCase::kCornerLoLo: return "3.1";
        case CandidateCase::kCornerLoHi: return "3.2";
        case CandidateCase::kCornerHiLo: return "3.3";
        case CandidateCase::kCornerHiHi: return "3.4";
    }
    return "?";
}

ReducedObjective ReducedObjective::for_receiver(const Scenario& scenario, int i,
                                                double b_km) {
    if (i < 1 || i >= scenario.node_count()) {
        throw std::out_of_range("receiver index must be 1..m-1");
    }
    const Vec3 a = scenario.anchors().position(i);
    return ReducedObjective{b_km, a, a.squaredNorm()};
}

double h_eval(const Eigen::Vector2d& v, const ReducedObjective& obj) {
    const Vec3& a = obj.anchor_km;
    const double t = 1.0 + v.squaredNorm();
    const double s = a.x() + a.y() * v(0) + a.z() * v(1);
    return -2.0 * obj.b_km * s / std::sqrt(t) + obj.delta_sq_1i + obj.b_km * obj.b_km;
}

Eigen::Vector2d h_grad(const Eigen::Vector2d& v, const ReducedObjective& obj) {
    const Vec3& a = obj.anchor_km;
    const double t = 1.0 + v.squaredNorm();
    const double s = a.x() + a.y() * v(0) + a.z() * v(1);
    const double scale = 2.0 * obj.b_km / (t * std::sqrt(t));
    return scale * Eigen::Vector2d(v(0) * s - a.y() * t, v(1) * s - a.z() * t);
}

std::vector<Candidate> enumerate_candidates(const ReducedObjective& obj,
                                            const Beam& beam, ExtremeMode mode) {
    const double ga = beam.gamma_a(), ge = beam.gamma_e();
    const double x = obj.anchor_km.x(), y = obj.anchor_km.y(), z = obj.anchor_km.z();
    const double tol = kDenominatorTol * denom_scale(obj.anchor_km);
    const double sign = (mode == ExtremeMode::kMin) ? 1.0 : -1.0;

    std::vector<Candidate> out;
    auto emit = [&](CandidateCase c, const Eigen::Vector2d& v, const Eigen::Vector4d& mu) {
        out.push_back(Candidate{v, c, mode, mu, h_eval(v, obj)});
    };

    // Case 1: interior stationary point (y/x, z/x), defined for x != 0.
    // It satisfies the KKT system of both the min and the max problem.
    if (std::abs(x) > tol) {
        const Eigen::Vector2d v(y / x, z / x);
        if (std::abs(v(0)) <= ga && std::abs(v(1)) <= ge) {
            emit(CandidateCase::kInterior, v, Eigen::Vector4d::Zero());
        }
    }

    // Cases 2.1-2.2: azimuth edge active, elevation stationary.
    struct EdgeA { CandidateCase c; double v1; double den; double expr; int mu_index; };
    const EdgeA edges_a[] = {
        {CandidateCase::kEdgeV1Lo, -ga, x - ga * y, ga * x + y, 0},
        {CandidateCase::kEdgeV1Hi, +ga, x + ga * y, ga * x - y, 1},
    };
    for (const auto& e : edges_a) {
        if (std::abs(e.den) <= tol) continue;  // stationary point escapes to infinity
        const double v2 = (1.0 + ga * ga) * z / e.den;
        if (std::abs(v2) > ge || !holds_for(e.expr, mode)) continue;
        const Eigen::Vector2d v(e.v1, v2);
        Eigen::Vector4d mu = Eigen::Vector4d::Zero();
        if (e.expr != 0.0) {
            const double g1 = h_grad(v, obj)(0);
            mu(e.mu_index) = sign * (e.mu_index == 0 ? g1 : -g1);
        }
        emit(e.c, v, mu);
    }

    // Cases 2.3-2.4: elevation edge active, azimuth stationary.
    const EdgeA edges_e[] = {
        {CandidateCase::kEdgeV2Lo, -ge, x - ge * z, ge * x + z, 2},
        {CandidateCase::kEdgeV2Hi, +ge, x + ge * z, ge * x - z, 3},
    };
    for (const auto& e : edges_e) {
        if (std::abs(e.den) <= tol) continue;
        const double v1 = (1.0 + ge * ge) * y / e.den;
        if (std::abs(v1) > ga || !holds_for(e.expr, mode)) continue;
        const Eigen::Vector2d v(v1, e.v1);
        Eigen::Vector4d mu = Eigen::Vector4d::Zero();
        if (e.expr != 0.0) {
            const double g2 = h_grad(v, obj)(1);
            mu(e.mu_index) = sign * (e.mu_index == 2 ? g2 : -g2);
        }
        emit(e.c, v, mu);
    }

    // Cases 3.1-3.4: both constraints active (corners). Sign conditions
    // from Table I; multipliers read off the gradient.
    struct Corner { CandidateCase c; double s1, s2; double e1, e2; int m1, m2; };
    const Corner corners[] = {
        {CandidateCase::kCornerLoLo, -1, -1,
         ga * x + y * (1 + ge * ge) - ga * ge * z,
         ge * x + z * (1 + ga * ga) - ga * ge * y, 0, 2},
        {CandidateCase::kCornerLoHi, -1, +1,
         ga * x + y * (1 + ge * ge) + ga * ge * z,
         ge * x - z * (1 + ga * ga) - ga * ge * y, 0, 3},
        {CandidateCase::kCornerHiLo, +1, -1,
         ga * x - y * (1 + ge * ge) - ga * ge * z,
         ge * x + z * (1 + ga * ga) + ga * ge * y, 1, 2},
        {CandidateCase::kCornerHiHi, +1, +1,
         ga * x - y * (1 + ge * ge) + ga * ge * z,
         ge * x - z * (1 + ga * ga) + ga * ge * y, 1, 3},
    };
    for (const auto& c : corners) {
        if (!holds_for(c.e1, mode) || !holds_for(c.e2, mode)) continue;
        const Eigen::Vector2d v(c.s1 * ga, c.s2 * ge);
        const Eigen::Vector2d g = h_grad(v, obj);
        Eigen::Vector4d mu = Eigen::Vector4d::Zero();
        if (c.e1 != 0.0) mu(c.m1) = sign * (c.m1 == 0 ? g(0) : -g(0));
        if (c.e2 != 0.0) mu(c.m2) = sign * (c.m2 == 2 ? g(1) : -g(1));
        emit(c.c, v, mu);
    }

    return out;
}

namespace {

struct Extremes {
    double lo, hi;
    Eigen::Vector2d argmin, argmax;
    CandidateCase case_min, case_max;
};

Extremes bounds_for(const ReducedObjective& obj, const Beam& beam) {
    const double ga = beam.gamma_a(), ge = beam.gamma_e();

    Extremes ext;
    bool have_min = false, have_max = false;
    auto consider = [&](const Eigen::Vector2d& v, CandidateCase c, double val, bool mn,
                        bool mx) {
        if (mn && (!have_min || val < ext.lo)) {
            ext.lo = val; ext.argmin = v; ext.case_min = c; have_min = true;
        }
        if (mx && (!have_max || val > ext.hi)) {
            ext.hi = val; ext.argmax = v; ext.case_max = c; have_max = true;
        }
    };

    for (const auto& cand : enumerate_candidates(obj, beam, ExtremeMode::kMin)) {
        consider(cand.v, cand.case_id, cand.value, true, false);
    }
    for (const auto& cand : enumerate_candidates(obj, beam, ExtremeMode::kMax)) {
        consider(cand.v, cand.case_id, cand.value, false, true);
    }
    // Corner fallback: evaluated in both pools unconditionally, so the
    // extremum over a compact box is never missed to a misclassified
    // sign condition.
    const std::pair<Eigen::Vector2d, CandidateCase> corners[] = {
        {{-ga, -ge}, CandidateCase::kCornerLoLo},
        {{-ga, +ge}, CandidateCase::kCornerLoHi},
        {{+ga, -ge}, CandidateCase::kCornerHiLo},
        {{+ga, +ge}, CandidateCase::kCornerHiHi},
    };
    for (const auto& [v, c] : corners) {
        consider(v, c, h_eval(v, obj), true, true);
    }
    ext.lo = std::max(ext.lo, 0.0);
    return ext;
}

}  // namespace

BoundsPair compute_bounds(const Scenario& scenario, double b_km) {
    if (!(b_km > 0.0)) {
        throw std::invalid_argument("compute_bounds requires b > 0");
    }
    const int m = scenario.node_count();
    BoundsPair out;
    out.l.resize(m - 1);
    out.u.resize(m - 1);
    for (int i = 1; i < m; ++i) {
        const auto ext =
            bounds_for(ReducedObjective::for_receiver(scenario, i, b_km), scenario.beam());
        out.l(i - 1) = ext.lo;
        out.u(i - 1) = ext.hi;
    }
    return out;
}

std::vector<BoundsDetail> compute_bounds_detail(const Scenario& scenario, double b_km) {
    const int m = scenario.node_count();
    std::vector<BoundsDetail> rows;
    for (int i = 1; i < m; ++i) {
        const auto ext =
            bounds_for(ReducedObjective::for_receiver(scenario, i, b_km), scenario.beam());
        rows.push_back(BoundsDetail{i + 1, ext.lo, ext.hi, ext.argmin, ext.argmax,
                                    ext.case_min, ext.case_max});
    }
    return rows;
}

GridOracleResult grid_oracle_bounds(const ReducedObjective& obj, const Beam& beam,
                                    int grid_n) {
    if (grid_n < 2) {
        throw std::invalid_argument("grid_oracle_bounds requires grid_n >= 2");
    }
    const double ga = beam.gamma_a(), ge = beam.gamma_e();

    GridOracleResult res;
    res.min_value = std::numeric_limits<double>::infinity();
    res.max_value = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_n; ++i) {
        const double v1 = (ga == 0.0) ? 0.0 : -ga + 2.0 * ga * i / (grid_n - 1);
        for (int j = 0; j < grid_n; ++j) {
            const double v2 = (ge == 0.0) ? 0.0 : -ge + 2.0 * ge * j / (grid_n - 1);
            const double val = h_eval({v1, v2}, obj);
            if (val < res.min_value) { res.min_value = val; res.argmin = {v1, v2}; }
            if (val > res.max_value) { res.max_value = val; res.argmax = {v1, v2}; }
        }
    }

    // Projected-gradient polish with step halving from the best cells.
    const double cell = std::max(2.0 * ga, 2.0 * ge) / (grid_n - 1);
    auto clamp_box = [&](Eigen::Vector2d v) {
        v(0) = std::clamp(v(0), -ga, ga);
        v(1) = std::clamp(v(1), -ge, ge);
        return v;
    };
    auto polish = [&](Eigen::Vector2d v, double dir) {
        double best = dir * h_eval(v, obj);
        double step = cell;
        for (int it = 0; it < 100; ++it) {
            Eigen::Vector2d g = h_grad(v, obj);
            const double norm = g.norm();
            if (norm == 0.0) break;
            const Eigen::Vector2d trial = clamp_box(v - dir * step * g / norm);
            const double val = dir * h_eval(trial, obj);
            if (val < best) {
                best = val;
                v = trial;
            } else {
                step *= 0.5;
            }
        }
        return std::pair{v, dir * best};
    };
    auto [vmin, fmin] = polish(res.argmin, +1.0);
    auto [vmax, fmax] = polish(res.argmax, -1.0);
    res.argmin = vmin;
    res.min_value = fmin;
    res.argmax = vmax;
    res.max_value = fmax;
    return res;
}

}  // namespace edmloc
