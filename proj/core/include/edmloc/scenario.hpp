#pragma once

#include <string>
#include <vector>

#include "edmloc/geometry.hpp"

namespace edmloc {

// Static world description: anchor geometry, transmit beam, waveform
// bandwidth, per-node loss factors, optional range bin, and the target.
// Immutable after construction and safe to share across threads.
class Scenario {
  public:
    Scenario(Anchors anchors, Beam beam, double bandwidth_hz,
             std::vector<double> losses_db, std::optional<RangeBin> range_bin,
             Vec3 target_km, bool target_was_polar);

    const Anchors& anchors() const { return anchors_; }
    const Beam& beam() const { return beam_; }
    double bandwidth_hz() const { return bandwidth_hz_; }
    const std::vector<double>& losses_db() const { return losses_db_; }
    const std::optional<RangeBin>& range_bin() const { return range_bin_; }
    const Vec3& target() const { return target_; }
    int node_count() const { return anchors_.count(); }

  private:
    Anchors anchors_;
    Beam beam_;
    double bandwidth_hz_;
    std::vector<double> losses_db_;
    std::optional<RangeBin> range_bin_;
    Vec3 target_;
};

// Five-node test geometry with beam (7 deg, 5 deg), B = 2 MHz, losses
// [0, 6, 6, 6, 6] dB and a polar target (20 km, 6.9 deg, 4.9 deg).
Scenario default_scenario();

// Parse a scenario JSON document. Keys: anchors_km, beam_deg,
// bandwidth_hz, losses_db, optional range_bin_km, target (either
// {"xyz_km": [...]} or {"polar": {"d_km", "theta_deg", "phi_deg"}}).
// Every key except target falls back to the default_scenario value.
// Polar targets are validated against the beam gate at load time.
Scenario scenario_from_json(const std::string& json_text);
Scenario load_scenario(const std::string& path);

// Convenience: copy with a different beam or target (used by the
// replication harness which sweeps targets and beams).
Scenario with_beam(const Scenario& s, const Beam& beam);
Scenario with_polar_target(const Scenario& s, double d_km, double theta_deg,
                           double phi_deg);

}  // namespace edmloc
