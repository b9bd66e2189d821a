#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>

// Coordinate conventions and beam geometry for the multistatic radar
// network. The transmitter sits at the origin with its beam steered
// along the +x axis; all distances are kilometers, angles radians.

namespace edmloc {

// Speed of light in km/s, the only physical constant the model needs.
inline constexpr double kSpeedOfLightKmPerS = 299792.458;

inline constexpr double deg2rad(double deg) { return deg * M_PI / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / M_PI; }

using Vec3 = Eigen::Vector3d;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Transmit-beam gate: azimuth/elevation half-beamwidths and their
// tangents (gamma_a, gamma_e). Angles are restricted to [0, pi/2).
class Beam {
  public:
    Beam(double theta_bar_rad, double phi_bar_rad);

    double theta_bar() const { return theta_bar_; }
    double phi_bar() const { return phi_bar_; }
    double gamma_a() const { return gamma_a_; }
    double gamma_e() const { return gamma_e_; }

  private:
    double theta_bar_;
    double phi_bar_;
    double gamma_a_;
    double gamma_e_;
};

// Detectable range bin [r_L, r_U], 0 < r_L <= r_U.
struct RangeBin {
    double r_lo_km;
    double r_hi_km;

    RangeBin(double lo, double hi);
};

// Node positions, one column per node; column 0 is the transmitter and
// must be exactly the origin. At least four nodes with affine rank 3
// are required so the Procrustes alignment is unique.
class Anchors {
  public:
    explicit Anchors(Eigen::Matrix3Xd positions_km);

    int count() const { return static_cast<int>(positions_.cols()); }
    Vec3 position(int i) const { return positions_.col(i); }
    const Eigen::Matrix3Xd& positions() const { return positions_; }

  private:
    Eigen::Matrix3Xd positions_;
};

// Azimuth/elevation of a point: theta = atan2(y, x), phi = atan2(z, x).
// Throws when an atan2 argument pair is (0, 0).
std::pair<double, double> azimuth_elevation(const Vec3& x);

// Beam gate test: x > 0, |y| <= gamma_a * x, |z| <= gamma_e * x.
// Boundary inclusive, orientation strict.
bool in_beam(const Vec3& x, const Beam& beam);

// Same test with a relative slack on the tangent inequalities; used by
// the multi-start acceptance check where the estimate is only converged
// to the solver tolerance (see SolverConfig::beam_accept_tol).
bool in_beam_with_margin(const Vec3& x, const Beam& beam, double rel_tol);

// (d*cos(theta)*cos(phi), d*sin(theta)*cos(phi), d*sin(phi)), d > 0.
Vec3 target_from_polar(double d_km, double theta_rad, double phi_rad);

// m x m matrix of squared pairwise distances between anchors.
Eigen::MatrixXd pairwise_sq_dist(const Anchors& anchors);

}  // namespace edmloc
