#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <array>
#include <cstdint>

namespace sketchfem {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using RowSparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Row index into the kd rows of the gradient operator.
using RowIndex = std::uint32_t;

/// SHA-256 digest of a mesh file.
using Fingerprint = std::array<std::uint8_t, 32>;

}  // namespace sketchfem
