#include "edmloc/geometry.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace edmloc {

Beam::Beam(double theta_bar_rad, double phi_bar_rad)
    : theta_bar_(theta_bar_rad), phi_bar_(phi_bar_rad) {
    if (!(theta_bar_ >= 0.0 && theta_bar_ < M_PI / 2.0) ||
        !(phi_bar_ >= 0.0 && phi_bar_ < M_PI / 2.0)) {
        throw ConfigError("beam half-widths must lie in [0, pi/2)");
    }
    gamma_a_ = std::tan(theta_bar_);
    gamma_e_ = std::tan(phi_bar_);
    if (!std::isfinite(gamma_a_) || !std::isfinite(gamma_e_)) {
        throw ConfigError("beam tangents must be finite");
    }
}

RangeBin::RangeBin(double lo, double hi) : r_lo_km(lo), r_hi_km(hi) {
    if (!(lo > 0.0) || !(lo <= hi)) {
        throw ConfigError("range bin requires 0 < r_L <= r_U");
    }
}

Anchors::Anchors(Eigen::Matrix3Xd positions_km) : positions_(std::move(positions_km)) {
    const int m = count();
    if (m < 4) {
        throw ConfigError("need at least 4 anchors");
    }
    if (positions_.col(0) != Vec3::Zero()) {
        throw ConfigError("transmitter (anchor 0) must sit exactly at the origin");
    }
    if (!positions_.allFinite()) {
        throw ConfigError("anchor positions must be finite");
    }
    // Affine rank 3: singular values of the centered position matrix.
    Eigen::Matrix3Xd centered = positions_.colwise() - positions_.rowwise().mean();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
    const auto& sv = svd.singularValues();
    if (sv.size() < 3 || sv(2) <= 1e-9 * sv(0)) {
        throw ConfigError("anchor set is affinely degenerate (rank < 3)");
    }
}

std::pair<double, double> azimuth_elevation(const Vec3& x) {
    if (x.x() == 0.0 && x.y() == 0.0) {
        throw std::domain_error("azimuth undefined: atan2(0, 0)");
    }
    if (x.x() == 0.0 && x.z() == 0.0) {
        throw std::domain_error("elevation undefined: atan2(0, 0)");
    }
    return {std::atan2(x.y(), x.x()), std::atan2(x.z(), x.x())};
}

bool in_beam(const Vec3& x, const Beam& beam) {
    return x.x() > 0.0 && std::abs(x.y()) <= beam.gamma_a() * x.x() &&
           std::abs(x.z()) <= beam.gamma_e() * x.x();
}

bool in_beam_with_margin(const Vec3& x, const Beam& beam, double rel_tol) {
    const double slack = rel_tol * x.norm();
    return x.x() > 0.0 && std::abs(x.y()) <= beam.gamma_a() * x.x() + slack &&
           std::abs(x.z()) <= beam.gamma_e() * x.x() + slack;
}

Vec3 target_from_polar(double d_km, double theta_rad, double phi_rad) {
    if (!(d_km > 0.0)) {
        throw ConfigError("polar target requires d > 0");
    }
    const double ct = std::cos(theta_rad), st = std::sin(theta_rad);
    const double cp = std::cos(phi_rad), sp = std::sin(phi_rad);
    return {d_km * ct * cp, d_km * st * cp, d_km * sp};
}

Eigen::MatrixXd pairwise_sq_dist(const Anchors& anchors) {
    const int m = anchors.count();
    Eigen::MatrixXd d2(m, m);
    for (int i = 0; i < m; ++i) {
        d2(i, i) = 0.0;
        for (int j = i + 1; j < m; ++j) {
            d2(i, j) = d2(j, i) = (anchors.position(i) - anchors.position(j)).squaredNorm();
        }
    }
    return d2;
}

}  // namespace edmloc
