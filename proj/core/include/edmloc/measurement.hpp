#pragma once

#include <cstdint>
#include <vector>

#include "edmloc/scenario.hpp"

namespace edmloc {

// Additive gaussian range-noise model. The per-node standard deviation
// follows the standard delay-estimation accuracy scaling
//     sigma_i = c / (2 B sqrt(2 * SNR_i,lin)),   SNR_i = SNR0 - L_i [dB],
// so the range resolution c/2B shrinks with the root of the effective
// SNR. Node 0 (the transmitter) carries loss L_1 = 0 dB by default and
// is therefore the least noisy node.
struct NoiseModel {
    double bandwidth_hz;
    std::vector<double> losses_db;

    double sigma_km(int node, double snr0_db) const;
};

double sigma_from_snr(double snr0_db, double loss_db, double bandwidth_hz);

// b := max(min(delta_1n, r_U), r_L)
double clamp_b(double delta_1n_km, const RangeBin& bin);

// Range bin used when the scenario does not specify one: width c/2B,
// floor-aligned so that it contains the true transmitter range.
RangeBin default_range_bin(double true_range_km, double bandwidth_hz);

// Effective bin: the scenario's, or the default around ||target||.
RangeBin effective_range_bin(const Scenario& scenario, const Vec3& target);

// Noiseless time delays in seconds: tau_1 = 2||x||/c (round trip),
// tau_i = (||x|| + ||x - x_i||)/c. Defined so that the conversion
// delta_1n = c*tau_1/2, delta_in = c*tau_i - c*tau_1/2 recovers the
// exact ranges.
std::vector<double> true_delays(const Scenario& scenario, const Vec3& x);

// Noisy bistatic ranges plus the assembled dissimilarity matrix.
// big_delta is (m+1) x (m+1): exact anchor block, delta_in^2 in the
// last column/row, zero diagonal. Note big_delta(0, n-1) holds the
// *unclamped* delta_1n^2; the solver pins that entry to b^2 instead.
struct MeasurementSet {
    std::vector<double> delta_km;  // m noisy ranges, index 0 = transmitter
    double b_km;                   // clamped transmitter range
    Eigen::MatrixXd big_delta;     // n x n, km^2
    double snr0_db;
};

// Draw one measurement set. Noise streams are seeded by
// (trial_seed, node), so the set is bit-reproducible and independent of
// any other trial. Throws if the true target violates the beam gate or
// the effective range bin. sigma = 0 for all nodes when noiseless.
MeasurementSet synthesize(const Scenario& scenario, const Vec3& x, double snr0_db,
                          std::uint64_t trial_seed, bool noiseless = false);

}  // namespace edmloc
