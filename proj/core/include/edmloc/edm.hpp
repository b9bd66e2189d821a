#pragma once

#include <Eigen/Dense>
#include <stdexcept>

// Euclidean-distance-matrix primitives: double centering, projection
// onto the r-cut of the conditional positive semidefinite cone, the
// cone-distance penalty, spectral diagnostics, classical-MDS embedding
// and Procrustes alignment.

namespace edmloc {

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Symmetric matrix with symmetry enforced at construction and paired
// writes afterwards. Entries are km^2 in all solver uses.
class SymMatrix {
  public:
    SymMatrix() = default;
    explicit SymMatrix(const Eigen::MatrixXd& m);
    static SymMatrix zero(int n) { return SymMatrix(Eigen::MatrixXd::Zero(n, n)); }

    int order() const { return static_cast<int>(mat_.rows()); }
    double operator()(int i, int j) const { return mat_(i, j); }
    void set(int i, int j, double v) { mat_(i, j) = mat_(j, i) = v; }
    const Eigen::MatrixXd& mat() const { return mat_; }

  private:
    Eigen::MatrixXd mat_;
};

// J A J with J = I - (1/n) 1 1^T. Callers apply the -1/2 themselves.
Eigen::MatrixXd double_center(const SymMatrix& a);

struct ConeProjection {
    SymMatrix projected;        // Pi_{K+^n(r)}(A)
    Eigen::VectorXd eigenvalues;  // spectrum of JAJ, descending
    int used_rank;              // kept strictly-positive leading eigenvalues
};

// Orthogonal projection onto the r-cut of the conditional PSD cone:
//   Pi(A) = A - JAJ + PCA_r^+(JAJ),
// where PCA_r^+ keeps the r largest eigenvalues truncated below at 0.
// Eigenvectors are sign-canonicalized (largest-magnitude component
// positive) so repeated runs are bit-identical.
ConeProjection project_kplus_r(const SymMatrix& a, int r);

// g(D) = 1/2 || D + Pi_{K+^n(r)}(-D) ||_F^2; zero iff -D lies in the cone.
double g_value(const SymMatrix& d, int r);

// Spectral mass of the top three eigenvalues of -JDJ/2 relative to the
// total absolute mass; 1 certifies a numerically exact 3D EDM. Returns 1
// for the zero matrix.
double eigenratio(const SymMatrix& d);

struct Embedding {
    Eigen::Matrix3Xd points_km;      // n columns, zero-padded to 3 rows
    Eigen::Vector3d gram_eigenvalues;  // top-3 spectrum of -JDJ/2
};

// Classical MDS coordinates from the top-min(r, #positive) eigenpairs of
// -JDJ/2, zero-padded to r <= 3 dimensions. Throws NumericalError when
// the centered spectrum has no positive eigenvalue.
Embedding embed_r(const SymMatrix& d, int r);

struct RigidMap {
    Eigen::Matrix3d rotation;  // orthogonal, reflections allowed
    Eigen::Vector3d translation;
    double residual_rms;

    Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
        return rotation * p + translation;
    }
};

// Least-squares rigid registration of `source` onto `anchors` via SVD of
// the cross-covariance. Throws NumericalError when the anchor set is
// affinely degenerate.
RigidMap procrustes_map(const Eigen::Matrix3Xd& source, const Eigen::Matrix3Xd& anchors);

}  // namespace edmloc
