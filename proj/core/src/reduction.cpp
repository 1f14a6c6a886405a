#include <sketchfem/reduction.hpp>

#include <sketchfem/assembly.hpp>
#include <sketchfem/error.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace sketchfem {

SparseMatrix laplacian(const GradientOperator& op) {
  return assemble_stiffness(op, ParameterField{Vector::Ones(op.num_elements()), op.volumes});
}

EigenPairs compute_basis(const SparseMatrix& laplacian, Index rho, const EigensolverOptions& options) {
  if (rho < 1 || rho > laplacian.rows()) {
    throw ValidationError("rho must lie in [1, " + std::to_string(laplacian.rows()) + "], got " +
                          std::to_string(rho));
  }
  return smallest_eigenpairs(laplacian, rho, options);
}

Matrix orthonormal_factor(const Matrix& x) {
  if (x.rows() < x.cols()) {
    throw ValidationError("leverage scores need a tall matrix, got " + std::to_string(x.rows()) +
                          "x" + std::to_string(x.cols()));
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(x);
  qr.setThreshold(1e-12);
  if (qr.rank() < x.cols()) {
    throw NumericalError("matrix is rank deficient: numerical rank " + std::to_string(qr.rank()) +
                         " < " + std::to_string(x.cols()) + " columns");
  }
  return qr.householderQ() * Matrix::Identity(x.rows(), x.cols());
}

Vector leverage_scores(const Matrix& x) {
  return orthonormal_factor(x).rowwise().squaredNorm();
}

LeverageProfile::LeverageProfile(const Matrix& x)
    : factor_(orthonormal_factor(x)), scores_(factor_.rowwise().squaredNorm()) {}

const Matrix& LeverageProfile::cross_matrix(Index max_rows) const {
  if (factor_.rows() > max_rows) {
    throw ValidationError("cross-leverage matrix with " + std::to_string(factor_.rows()) +
                          " rows exceeds the limit of " + std::to_string(max_rows));
  }
  if (!cross_) cross_ = factor_ * factor_.transpose();
  return *cross_;
}

Vector sampling_distribution(const Vector& leverage, Index rho) {
  if (rho < 1) throw ValidationError("rho must be positive");
  if (leverage.size() == 0) throw ValidationError("empty leverage vector");
  for (Index i = 0; i < leverage.size(); ++i) {
    if (!(leverage[i] >= 0.0) || !std::isfinite(leverage[i])) {
      throw ValidationError("leverage score " + std::to_string(i) + " is negative or not finite");
    }
  }
  Vector q = leverage / static_cast<double>(rho);
  const double total = q.sum();
  if (!(total > 0.0)) throw ValidationError("leverage scores sum to zero");
  q /= total;
  return q;
}

ReweightedLeverage reweighted_leverage(const Matrix& x, Index row, double gamma) {
  if (row < 0 || row >= x.rows()) throw ValidationError("row index out of range");
  if (!(gamma > 0.0)) throw ValidationError("gamma must be positive");
  const LeverageProfile profile(x);
  const Vector cross = profile.cross_row(row);
  const double li = profile.scores()[row];
  const double denominator = 1.0 - (1.0 - gamma) * li;

  ReweightedLeverage out;
  out.scores = profile.scores() + ((1.0 - gamma) / denominator) * cross.cwiseAbs2();
  out.row_score = gamma * li / denominator;
  out.scores[row] = out.row_score;
  return out;
}

double sampling_quality(const Vector& probabilities, const Vector& true_leverage, Index rho) {
  if (probabilities.size() != true_leverage.size()) throw ValidationError("sampling quality: length mismatch");
  double beta = 1.0;
  for (Index i = 0; i < probabilities.size(); ++i) {
    if (true_leverage[i] > 0.0) beta = std::min(beta, probabilities[i] * static_cast<double>(rho) / true_leverage[i]);
  }
  return beta;
}

OfflineBundle build_offline_bundle(const Mesh& mesh, const GradientOperator& op, Index rho,
                                   const Vector& forcing, const Fingerprint& fingerprint,
                                   const EigensolverOptions& options) {
  if (op.num_interior() != mesh.num_interior() || op.num_elements() != mesh.num_elements()) {
    throw ValidationError("gradient operator does not belong to this mesh");
  }
  const SparseMatrix delta = laplacian(op);
  EigenPairs pairs = compute_basis(delta, rho, options);

  const Vector row_scale = expand_weights(op.volumes, op.dim).cwiseSqrt();
  const Matrix x = row_scale.asDiagonal() * (op.interior * pairs.vectors);

  OfflineBundle bundle;
  bundle.leverage = leverage_scores(x);
  bundle.probabilities = sampling_distribution(bundle.leverage, rho);
  bundle.reduced_load = reduced_load(pairs.vectors, assemble_load(mesh, forcing).b);
  bundle.basis = std::move(pairs.vectors);
  bundle.eigenvalues = std::move(pairs.values);
  bundle.mesh_fingerprint = fingerprint;
  return bundle;
}

}  // namespace sketchfem
