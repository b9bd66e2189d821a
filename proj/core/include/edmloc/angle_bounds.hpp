#pragma once

#include <vector>

#include "edmloc/scenario.hpp"

// Conversion of the transmit-beam gate into per-receiver squared-range
// bounds. On the range sphere ||x|| = b the squared distance to a
// receiver reduces to a smooth function h of the angle tangents
// v = (tan(theta), tan(phi)); its extrema over the tangent box V are
// attained at a finite set of KKT candidates (one interior stationary
// point, four edge points, four corners), enumerated in closed form.

namespace edmloc {

// Per-receiver data for the reduced objective h(v).
struct ReducedObjective {
    double b_km;        // clamped transmitter range
    Vec3 anchor_km;     // receiver position
    double delta_sq_1i; // ||x_i||^2 (the (1,i) entry of the anchor block)

    static ReducedObjective for_receiver(const Scenario& scenario, int i, double b_km);
};

enum class CandidateCase {
    kInterior,   // case 1
    kEdgeV1Lo,   // case 2.1, v1 = -gamma_a
    kEdgeV1Hi,   // case 2.2, v1 = +gamma_a
    kEdgeV2Lo,   // case 2.3, v2 = -gamma_e
    kEdgeV2Hi,   // case 2.4, v2 = +gamma_e
    kCornerLoLo, // case 3.1, (-gamma_a, -gamma_e)
    kCornerLoHi, // case 3.2, (-gamma_a, +gamma_e)
    kCornerHiLo, // case 3.3, (+gamma_a, -gamma_e)
    kCornerHiHi, // case 3.4, (+gamma_a, +gamma_e)
};

const char* case_label(CandidateCase c);

enum class ExtremeMode { kMin, kMax };

struct Candidate {
    Eigen::Vector2d v;
    CandidateCase case_id;
    ExtremeMode mode;
    Eigen::Vector4d mu;  // multipliers (mu1..mu4), inactive ones exactly 0
    double value;        // h(v)
};

// h_i(v) = -2 b (x_i + y_i v1 + z_i v2)/sqrt(1 + v1^2 + v2^2) + ||x_i||^2 + b^2
double h_eval(const Eigen::Vector2d& v, const ReducedObjective& obj);

// Closed-form gradient of h_i.
Eigen::Vector2d h_grad(const Eigen::Vector2d& v, const ReducedObjective& obj);

// All KKT candidates of the requested mode whose sign and interval
// conditions hold. Edge candidates with a near-zero denominator are
// skipped (the stationary point escapes the box; the corners cover the
// boundary). Condition expressions that are exactly zero count for both
// modes with a zero multiplier.
std::vector<Candidate> enumerate_candidates(const ReducedObjective& obj,
                                            const Beam& beam, ExtremeMode mode);

// Squared-distance box for receivers 2..m (0-based: 1..m-1).
struct BoundsPair {
    Eigen::VectorXd l;  // (m-1) lower bounds, km^2
    Eigen::VectorXd u;  // (m-1) upper bounds, km^2
};

// Diagnostic row emitted by the `bounds` CLI subcommand.
struct BoundsDetail {
    int receiver;  // 1-based node index of the receiver (2..m)
    double l, u;
    Eigen::Vector2d argmin_v, argmax_v;
    CandidateCase argmin_case, argmax_case;
};

// Evaluate every candidate of each mode plus the four corners (safety
// fallback, so the pools are never empty) and take the extremes.
BoundsPair compute_bounds(const Scenario& scenario, double b_km);
std::vector<BoundsDetail> compute_bounds_detail(const Scenario& scenario, double b_km);

// Brute-force oracle: dense lattice over V followed by a projected-
// gradient polish (step halving, 100 iterations) from the best cell.
// Independent of the KKT enumeration; used to validate it.
struct GridOracleResult {
    double min_value, max_value;
    Eigen::Vector2d argmin, argmax;
};
GridOracleResult grid_oracle_bounds(const ReducedObjective& obj, const Beam& beam,
                                    int grid_n);

}  // namespace edmloc
