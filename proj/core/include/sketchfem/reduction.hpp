#pragma once

#include <sketchfem/eigensolver.hpp>
#include <sketchfem/mesh.hpp>
#include <sketchfem/types.hpp>

#include <optional>

namespace sketchfem {

/// Everything the online stage needs, computed once per mesh.
///
/// Basis columns are Laplacian eigenvectors in ascending eigenvalue order
/// (column 0 is the smoothest mode). This is the same subspace as taking
/// the trailing columns of a descending-order eigenvector matrix.
struct OfflineBundle {
  Matrix basis;          // n x rho, orthonormal columns
  Vector eigenvalues;    // rho, ascending
  Vector leverage;       // kd leverage scores of Z_Delta D Psi
  Vector probabilities;  // kd sampling distribution q = leverage / rho
  Vector reduced_load;   // Psi^T b
  Fingerprint mesh_fingerprint{};

  Index num_interior() const { return basis.rows(); }
  Index rank() const { return basis.cols(); }
  Index num_rows() const { return leverage.size(); }
};

/// Delta = D^T diag(|Omega_l| (x) 1_d) D: the stiffness matrix for p == 1.
SparseMatrix laplacian(const GradientOperator& op);

/// rho smallest eigenpairs of the Laplacian.
EigenPairs compute_basis(const SparseMatrix& laplacian, Index rho,
                         const EigensolverOptions& options = {});

/// Orthonormal left factor U_X of a tall full-rank matrix (thin QR).
/// Throws NumericalError naming the numerical rank if X is rank deficient.
Matrix orthonormal_factor(const Matrix& x);

/// l_i = ||(U_X)_(i)||^2.
Vector leverage_scores(const Matrix& x);

/// Leverage scores with lazily materialized cross-leverage l_ij = (U U^T)_ij.
class LeverageProfile {
 public:
  explicit LeverageProfile(const Matrix& x);

  const Vector& scores() const { return scores_; }
  /// Single cross-leverage entry, O(rho).
  double cross(Index i, Index j) const { return factor_.row(i).dot(factor_.row(j)); }
  /// Row i of the projector U U^T, O(m rho).
  Vector cross_row(Index i) const { return factor_ * factor_.row(i).transpose(); }
  /// Full m x m projector; refused above `max_rows` rows.
  const Matrix& cross_matrix(Index max_rows = 2000) const;

 private:
  Matrix factor_;
  Vector scores_;
  mutable std::optional<Matrix> cross_;
};

/// q = l / rho, divided by its computed sum so the entries sum to 1.
Vector sampling_distribution(const Vector& leverage, Index rho);

/// Largest beta with q_i >= beta l_i / rho for every row, l the true
/// leverage scores of a query's Z D Psi. Needs one thin QR of a kd x rho
/// matrix; meant for small instances.
double sampling_quality(const Vector& probabilities, const Vector& true_leverage, Index rho);

struct ReweightedLeverage {
  double row_score;  // l_i(Gamma<i> X)
  Vector scores;     // l_j(Gamma<i> X) for all j
};

/// Closed-form leverage scores after scaling row i of X by sqrt(gamma).
ReweightedLeverage reweighted_leverage(const Matrix& x, Index row, double gamma);

/// laplacian -> compute_basis -> leverage of Z_Delta D Psi -> q -> Psi^T b.
OfflineBundle build_offline_bundle(const Mesh& mesh, const GradientOperator& op, Index rho,
                                   const Vector& forcing, const Fingerprint& fingerprint = {},
                                   const EigensolverOptions& options = {});

}  // namespace sketchfem
