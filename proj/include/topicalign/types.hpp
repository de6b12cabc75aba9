#pragma once

#include <Eigen/Core>

namespace topicalign {

// Row-major storage: topic:term and document:topic matrices are consumed row
// by row (one distribution per row).
template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using RowMatrixXd = RowMatrix<double>;
using VectorXd = Vector<double>;

}  // namespace topicalign
