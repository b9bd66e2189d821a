#include "edmloc/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace edmloc {

namespace {

Eigen::Matrix3Xd default_anchor_positions() {
    Eigen::Matrix3Xd p(3, 5);
    p.col(0) << 0.0, 0.0, 0.0;
    p.col(1) << 0.916, 0.941, 0.095;
    p.col(2) << 0.973, 0.541, 0.764;
    p.col(3) << 0.955, 0.483, 0.191;
    p.col(4) << 0.936, 0.350, 0.477;
    return p;
}

}  // namespace

Scenario::Scenario(Anchors anchors, Beam beam, double bandwidth_hz,
                   std::vector<double> losses_db, std::optional<RangeBin> range_bin,
                   Vec3 target_km, bool target_was_polar)
    : anchors_(std::move(anchors)),
      beam_(beam),
      bandwidth_hz_(bandwidth_hz),
      losses_db_(std::move(losses_db)),
      range_bin_(range_bin),
      target_(std::move(target_km)) {
    if (!(bandwidth_hz_ > 0.0)) {
        throw ConfigError("bandwidth must be positive");
    }
    if (static_cast<int>(losses_db_.size()) != anchors_.count()) {
        throw ConfigError("losses_db must have one entry per node");
    }
    if (target_was_polar && !in_beam(target_, beam_)) {
        throw ConfigError("polar target lies outside the transmit beam");
    }
}

Scenario default_scenario() {
    const Vec3 target = target_from_polar(20.0, deg2rad(6.9), deg2rad(4.9));
    return Scenario(Anchors(default_anchor_positions()),
                    Beam(deg2rad(7.0), deg2rad(5.0)), 2e6,
                    {0.0, 6.0, 6.0, 6.0, 6.0}, std::nullopt, target,
                    /*target_was_polar=*/true);
}

Scenario scenario_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("scenario JSON parse error: ") + e.what());
    }

    Eigen::Matrix3Xd pos = default_anchor_positions();
    if (j.contains("anchors_km")) {
        const auto& a = j.at("anchors_km");
        pos.resize(3, static_cast<int>(a.size()));
        for (int i = 0; i < static_cast<int>(a.size()); ++i) {
            const auto& row = a.at(i);
            if (row.size() != 3) throw ConfigError("anchors_km entries must be [x,y,z]");
            pos.col(i) << row.at(0).get<double>(), row.at(1).get<double>(),
                row.at(2).get<double>();
        }
    }
    Anchors anchors(pos);

    double th = 7.0, ph = 5.0;
    if (j.contains("beam_deg")) {
        const auto& b = j.at("beam_deg");
        if (b.size() != 2) throw ConfigError("beam_deg must be [theta_bar, phi_bar]");
        th = b.at(0).get<double>();
        ph = b.at(1).get<double>();
    }
    Beam beam(deg2rad(th), deg2rad(ph));

    double bandwidth = j.value("bandwidth_hz", 2e6);

    std::vector<double> losses;
    if (j.contains("losses_db")) {
        losses = j.at("losses_db").get<std::vector<double>>();
    } else {
        losses.assign(anchors.count(), 6.0);
        losses[0] = 0.0;
    }

    std::optional<RangeBin> bin;
    if (j.contains("range_bin_km")) {
        const auto& rb = j.at("range_bin_km");
        if (rb.size() != 2) throw ConfigError("range_bin_km must be [r_L, r_U]");
        bin.emplace(rb.at(0).get<double>(), rb.at(1).get<double>());
    }

    if (!j.contains("target")) {
        throw ConfigError("scenario file must specify a target");
    }
    const auto& t = j.at("target");
    Vec3 target;
    bool polar = false;
    if (t.contains("xyz_km")) {
        const auto& v = t.at("xyz_km");
        if (v.size() != 3) throw ConfigError("target.xyz_km must be [x,y,z]");
        target << v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>();
    } else if (t.contains("polar")) {
        const auto& p = t.at("polar");
        target = target_from_polar(p.at("d_km").get<double>(),
                                   deg2rad(p.at("theta_deg").get<double>()),
                                   deg2rad(p.at("phi_deg").get<double>()));
        polar = true;
    } else {
        throw ConfigError("target must have either xyz_km or polar");
    }

    return Scenario(std::move(anchors), beam, bandwidth, std::move(losses), bin,
                    target, polar);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open scenario file: " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

Scenario with_beam(const Scenario& s, const Beam& beam) {
    return Scenario(s.anchors(), beam, s.bandwidth_hz(), s.losses_db(),
                    s.range_bin(), s.target(), /*target_was_polar=*/false);
}

Scenario with_polar_target(const Scenario& s, double d_km, double theta_deg,
                           double phi_deg) {
    const Vec3 t = target_from_polar(d_km, deg2rad(theta_deg), deg2rad(phi_deg));
    return Scenario(s.anchors(), s.beam(), s.bandwidth_hz(), s.losses_db(),
                    s.range_bin(), t, /*target_was_polar=*/true);
}

}  // namespace edmloc
