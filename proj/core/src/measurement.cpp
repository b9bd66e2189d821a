#include "edmloc/measurement.hpp"

#include <cmath>

#include "edmloc/rng.hpp"

namespace edmloc {

double sigma_from_snr(double snr0_db, double loss_db, double bandwidth_hz) {
    const double snr_lin = std::pow(10.0, (snr0_db - loss_db) / 10.0);
    return kSpeedOfLightKmPerS / (2.0 * bandwidth_hz * std::sqrt(2.0 * snr_lin));
}

double NoiseModel::sigma_km(int node, double snr0_db) const {
    return sigma_from_snr(snr0_db, losses_db.at(node), bandwidth_hz);
}

double clamp_b(double delta_1n_km, const RangeBin& bin) {
    return std::max(std::min(delta_1n_km, bin.r_hi_km), bin.r_lo_km);
}

RangeBin default_range_bin(double true_range_km, double bandwidth_hz) {
    const double width = kSpeedOfLightKmPerS / (2.0 * bandwidth_hz);
    const double lo = width * std::floor(true_range_km / width);
    return RangeBin(lo, lo + width);
}

RangeBin effective_range_bin(const Scenario& scenario, const Vec3& target) {
    if (scenario.range_bin()) {
        return *scenario.range_bin();
    }
    return default_range_bin(target.norm(), scenario.bandwidth_hz());
}

std::vector<double> true_delays(const Scenario& scenario, const Vec3& x) {
    const int m = scenario.node_count();
    const double r0 = x.norm();
    std::vector<double> tau(m);
    tau[0] = 2.0 * r0 / kSpeedOfLightKmPerS;
    for (int i = 1; i < m; ++i) {
        tau[i] = (r0 + (x - scenario.anchors().position(i)).norm()) / kSpeedOfLightKmPerS;
    }
    return tau;
}

MeasurementSet synthesize(const Scenario& scenario, const Vec3& x, double snr0_db,
                          std::uint64_t trial_seed, bool noiseless) {
    if (!in_beam(x, scenario.beam())) {
        throw std::invalid_argument("synthesize: target outside the transmit beam");
    }
    const RangeBin bin = effective_range_bin(scenario, x);
    const double r0 = x.norm();
    if (r0 < bin.r_lo_km || r0 > bin.r_hi_km) {
        throw std::invalid_argument("synthesize: target outside the range bin");
    }

    const int m = scenario.node_count();
    const int n = m + 1;
    const NoiseModel noise{scenario.bandwidth_hz(), scenario.losses_db()};

    // delta from the delay conversion: delta_1n = c tau_1 / 2,
    // delta_in = c tau_i - c tau_1 / 2. In the noiseless case this is
    // exactly ||x - x_i||; noise enters per node afterwards.
    const std::vector<double> tau = true_delays(scenario, x);
    std::vector<double> delta(m);
    const double half_round_trip = 0.5 * kSpeedOfLightKmPerS * tau[0];
    delta[0] = half_round_trip;
    for (int i = 1; i < m; ++i) {
        delta[i] = kSpeedOfLightKmPerS * tau[i] - half_round_trip;
    }
    if (!noiseless) {
        for (int i = 0; i < m; ++i) {
            NoiseStream stream(mix_seed(trial_seed, 0x6e6f6465ull, static_cast<std::uint64_t>(i)));
            delta[i] += noise.sigma_km(i, snr0_db) * stream.gaussian();
            delta[i] = std::max(delta[i], 0.0);
        }
    }

    MeasurementSet out;
    out.delta_km = delta;
    out.b_km = clamp_b(delta[0], bin);
    out.snr0_db = snr0_db;
    out.big_delta = Eigen::MatrixXd::Zero(n, n);
    out.big_delta.topLeftCorner(m, m) = pairwise_sq_dist(scenario.anchors());
    for (int i = 0; i < m; ++i) {
        out.big_delta(i, n - 1) = out.big_delta(n - 1, i) = delta[i] * delta[i];
    }
    return out;
}

}  // namespace edmloc
