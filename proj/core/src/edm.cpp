#include "edmloc/edm.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace edmloc {

namespace {

// Deterministic full symmetric eigendecomposition, descending order,
// eigenvector signs canonicalized on the largest-magnitude component.
void eig_descending(const Eigen::MatrixXd& sym, Eigen::VectorXd& values,
                    Eigen::MatrixXd& vectors) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success) {
        throw NumericalError("symmetric eigendecomposition failed");
    }
    const int n = static_cast<int>(sym.rows());
    values.resize(n);
    vectors.resize(n, n);
    for (int k = 0; k < n; ++k) {
        values(k) = es.eigenvalues()(n - 1 - k);
        vectors.col(k) = es.eigenvectors().col(n - 1 - k);
        int arg = 0;
        vectors.col(k).cwiseAbs().maxCoeff(&arg);
        if (vectors(arg, k) < 0.0) {
            vectors.col(k) = -vectors.col(k);
        }
    }
}

}  // namespace

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("SymMatrix requires a square matrix");
    }
    if (!m.allFinite()) {
        throw NumericalError("SymMatrix requires finite entries");
    }
    mat_ = 0.5 * (m + m.transpose());
}

Eigen::MatrixXd double_center(const SymMatrix& a) {
    const Eigen::VectorXd row_mean = a.mat().rowwise().mean();
    const double total_mean = row_mean.mean();
    Eigen::MatrixXd out = a.mat();
    out.colwise() -= row_mean;
    out.rowwise() -= row_mean.transpose();
    out.array() += total_mean;
    return out;
}

ConeProjection project_kplus_r(const SymMatrix& a, int r) {
    const int n = a.order();
    if (r < 1 || r > n - 1) {
        throw std::invalid_argument("project_kplus_r requires 1 <= r <= n-1");
    }
    const Eigen::MatrixXd centered = double_center(a);
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    eig_descending(centered, values, vectors);

    Eigen::MatrixXd pca = Eigen::MatrixXd::Zero(n, n);
    int used = 0;
    for (int k = 0; k < r; ++k) {
        if (values(k) > 0.0) {
            pca.noalias() += values(k) * vectors.col(k) * vectors.col(k).transpose();
            ++used;
        }
    }
    ConeProjection out;
    out.projected = SymMatrix(a.mat() - centered + pca);
    out.eigenvalues = std::move(values);
    out.used_rank = used;
    return out;
}

double g_value(const SymMatrix& d, int r) {
    const ConeProjection proj = project_kplus_r(SymMatrix(-d.mat()), r);
    return 0.5 * (d.mat() + proj.projected.mat()).squaredNorm();
}

double eigenratio(const SymMatrix& d) {
    const SymMatrix h(-0.5 * double_center(d));
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    eig_descending(h.mat(), values, vectors);
    const double total = values.cwiseAbs().sum();
    if (total == 0.0) {
        return 1.0;
    }
    double top = 0.0;
    for (int k = 0; k < std::min<int>(3, values.size()); ++k) {
        top += std::abs(values(k));
    }
    return top / total;
}

Embedding embed_r(const SymMatrix& d, int r) {
    if (r < 1 || r > 3) {
        throw std::invalid_argument("embed_r supports 1 <= r <= 3");
    }
    const int n = d.order();
    const Eigen::MatrixXd h = -0.5 * double_center(d);
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    eig_descending(h, values, vectors);
    if (values(0) <= 0.0) {
        throw NumericalError("embed_r: centered matrix has no positive eigenvalue");
    }
    Embedding out;
    out.points_km = Eigen::Matrix3Xd::Zero(3, n);
    out.gram_eigenvalues.setZero();
    for (int k = 0; k < r && k < n; ++k) {
        out.gram_eigenvalues(k) = values(k);
        if (values(k) > 0.0) {
            out.points_km.row(k) = std::sqrt(values(k)) * vectors.col(k).transpose();
        }
    }
    return out;
}

RigidMap procrustes_map(const Eigen::Matrix3Xd& source, const Eigen::Matrix3Xd& anchors) {
    if (source.cols() != anchors.cols() || source.cols() < 3) {
        throw std::invalid_argument("procrustes_map: point sets must match, >= 3 points");
    }
    const Eigen::Vector3d sc = source.rowwise().mean();
    const Eigen::Vector3d ac = anchors.rowwise().mean();
    const Eigen::Matrix3Xd s = source.colwise() - sc;
    const Eigen::Matrix3Xd a = anchors.colwise() - ac;

    {
        Eigen::JacobiSVD<Eigen::MatrixXd> rank_check(a);
        const auto& sv = rank_check.singularValues();
        if (sv(2) <= 1e-9 * sv(0)) {
            throw NumericalError("procrustes_map: anchor set is affinely degenerate");
        }
    }

    const Eigen::Matrix3d cov = a * s.transpose();
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
    RigidMap map;
    map.rotation = svd.matrixU() * svd.matrixV().transpose();
    map.translation = ac - map.rotation * sc;
    map.residual_rms =
        std::sqrt((map.rotation * s - a).colwise().squaredNorm().mean());
    return map;
}

}  // namespace edmloc
