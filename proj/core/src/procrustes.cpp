#include "covsmooth/procrustes.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>

#include "covsmooth/errors.hpp"

namespace covsmooth {

namespace {

// Centers a configuration and scales it to unit Frobenius norm.
Eigen::MatrixX2d normalized_configuration(const Layout& layout) {
    const std::size_t n = layout.node_count();
    Eigen::MatrixX2d m(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        m(static_cast<Eigen::Index>(i), 0) = layout.at(i).x;
        m(static_cast<Eigen::Index>(i), 1) = layout.at(i).y;
    }
    m.rowwise() -= m.colwise().mean();
    const double norm = m.norm();
    if (norm == 0.0) {
        throw DegenerateInputError("all points coincide; shape is undefined");
    }
    return m / norm;
}

} // namespace

ProcrustesResult procrustes_disparity(const Layout& reference, const Layout& other) {
    if (reference.node_count() != other.node_count()) {
        throw DimensionMismatchError("layouts have different node counts");
    }
    if (reference.node_count() < 2) {
        throw DegenerateInputError("procrustes needs at least two nodes");
    }

    const Eigen::MatrixX2d x = normalized_configuration(reference);
    const Eigen::MatrixX2d y = normalized_configuration(other);

    // min over orthogonal R and scalar s of |X - s Y R|^2 with |X| = |Y| = 1
    // is 1 - (sum of singular values of X^T Y)^2, attained at R = V U^T.
    const Eigen::Matrix2d m = x.transpose() * y;
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double trace = svd.singularValues().sum();
    const Eigen::Matrix2d rotation = svd.matrixV() * svd.matrixU().transpose();

    ProcrustesResult result;
    result.disparity = std::max(0.0, 1.0 - trace * trace);
    result.scale = trace;
    result.rotation = {rotation(0, 0), rotation(0, 1), rotation(1, 0), rotation(1, 1)};
    return result;
}

} // namespace covsmooth
