#include <sketchfem/eigensolver.hpp>

#include <sketchfem/error.hpp>

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

namespace sketchfem {

namespace {

constexpr Index kDenseConditionLimit = 500;

Matrix orthonormalize(const Matrix& block) {
  const Eigen::HouseholderQR<Matrix> qr(block);
  return qr.householderQ() * Matrix::Identity(block.rows(), block.cols());
}

void normalize_signs(Matrix& vectors) {
  for (Index j = 0; j < vectors.cols(); ++j) {
    Index row = 0;
    vectors.col(j).cwiseAbs().maxCoeff(&row);
    if (vectors(row, j) < 0.0) vectors.col(j) *= -1.0;
  }
}

}  // namespace

EigenPairs smallest_eigenpairs(const SparseMatrix& a, Index count, const EigensolverOptions& options) {
  const Index n = a.rows();
  if (a.cols() != n) throw ValidationError("eigensolver needs a square matrix");
  if (count < 1 || count > n) {
    throw ValidationError("requested " + std::to_string(count) + " eigenpairs of a " +
                          std::to_string(n) + "x" + std::to_string(n) + " matrix");
  }

  const Eigen::SimplicialLLT<SparseMatrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("eigensolver: matrix is not positive definite");
  }

  const Index block = std::min(n, count + std::max(options.oversample, count / 4));
  const Index capacity = std::min(n, block * (options.krylov_blocks + 1));

  std::mt19937_64 engine(options.seed);
  std::normal_distribution<double> normal;
  Matrix start(n, block);
  for (Index j = 0; j < block; ++j) {
    for (Index i = 0; i < n; ++i) start(i, j) = normal(engine);
  }
  start = orthonormalize(start);

  Vector residuals;
  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    Matrix basis(n, capacity);
    basis.leftCols(block) = start;
    Index filled = block;
    Matrix last = start;

    for (int step = 0; step < options.krylov_blocks && filled < n; ++step) {
      Matrix next = llt.solve(last);
      const double scale = next.norm();
      for (int pass = 0; pass < 2; ++pass) {
        next -= basis.leftCols(filled) * (basis.leftCols(filled).transpose() * next);
      }
      const Eigen::ColPivHouseholderQR<Matrix> qr(next);
      const Vector pivots = qr.matrixR().diagonal().cwiseAbs();
      Index rank = 0;
      while (rank < pivots.size() && pivots[rank] > 1e-10 * scale) ++rank;
      rank = std::min(rank, n - filled);
      if (rank == 0) break;

      Matrix fresh = qr.householderQ() * Matrix::Identity(n, rank);
      fresh -= basis.leftCols(filled) * (basis.leftCols(filled).transpose() * fresh);
      fresh = orthonormalize(fresh);
      basis.middleCols(filled, rank) = fresh;
      filled += rank;
      last = fresh;
    }

    const auto subspace = basis.leftCols(filled);
    const Matrix image = a * subspace;
    Matrix projected = subspace.transpose() * image;
    projected = 0.5 * (projected + projected.transpose()).eval();
    const Eigen::SelfAdjointEigenSolver<Matrix> ritz(projected);
    if (ritz.info() != Eigen::Success) throw NumericalError("eigensolver: Rayleigh-Ritz step failed");

    const Matrix coefficients = ritz.eigenvectors().leftCols(count);
    const Vector values = ritz.eigenvalues().head(count);
    Matrix vectors = subspace * coefficients;
    residuals = (image * coefficients - vectors * values.asDiagonal()).colwise().norm().transpose();

    if (residuals.maxCoeff() <= options.tolerance) {
      normalize_signs(vectors);
      return EigenPairs{std::move(vectors), values, residuals, restart};
    }
    start = orthonormalize(subspace * ritz.eigenvectors().leftCols(std::min(block, filled)));
    if (start.cols() < block) {
      // Subspace smaller than the block (tiny n); pad with fresh directions.
      Matrix padded(n, block);
      padded.leftCols(start.cols()) = start;
      for (Index j = start.cols(); j < block; ++j) {
        for (Index i = 0; i < n; ++i) padded(i, j) = normal(engine);
      }
      start = orthonormalize(padded);
    }
  }

  std::ostringstream message;
  message << "eigensolver did not converge after " << options.max_restarts
          << " restarts; residual norms:";
  for (Index j = 0; j < residuals.size(); ++j) message << ' ' << residuals[j];
  throw NumericalError(message.str());
}

double largest_eigenvalue(const LinearOperator& op, Index n, const LanczosOptions& options) {
  if (n < 1) throw ValidationError("operator dimension must be positive");
  std::mt19937_64 engine(options.seed);
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = normal(engine);
  v.normalize();
  Vector previous = Vector::Zero(n);
  Vector w(n);

  std::vector<double> alpha, beta;
  double estimate = 0.0;
  double off_diagonal = 0.0;
  for (int j = 0; j < options.max_iterations; ++j) {
    op(v, w);
    const double a = w.dot(v);
    w -= a * v + off_diagonal * previous;
    alpha.push_back(a);
    off_diagonal = w.norm();

    const bool exhausted = off_diagonal <= 1e-14 * std::max(std::abs(a), 1e-300) ||
                           static_cast<Index>(alpha.size()) >= n;
    if (j % 5 == 4 || exhausted || j + 1 == options.max_iterations) {
      const auto m = static_cast<Index>(alpha.size());
      Vector diag = Eigen::Map<Vector>(alpha.data(), m);
      Vector sub = m > 1 ? Vector(Eigen::Map<Vector>(beta.data(), m - 1)) : Vector();
      Eigen::SelfAdjointEigenSolver<Matrix> tri;
      tri.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
      const double current = tri.eigenvalues().maxCoeff();
      if (exhausted || (j > 5 && std::abs(current - estimate) <= options.tolerance * std::abs(current))) {
        return current;
      }
      estimate = current;
    }
    beta.push_back(off_diagonal);
    previous = v;
    v = w / off_diagonal;
  }
  return estimate;
}

double condition_number(const Matrix& a) {
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(a, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("dense eigenvalue computation failed");
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

double condition_number(const SparseMatrix& a, const std::function<Vector(const Vector&)>& solve,
                        const LanczosOptions& options) {
  const Index n = a.rows();
  if (n <= kDenseConditionLimit) return condition_number(Matrix(a));
  const double hi = largest_eigenvalue([&](const Vector& in, Vector& out) { out = a * in; }, n, options);
  const double inverse_hi =
      largest_eigenvalue([&](const Vector& in, Vector& out) { out = solve(in); }, n, options);
  return hi * inverse_hi;
}

double condition_number(const SparseMatrix& a, const LanczosOptions& options) {
  if (a.rows() <= kDenseConditionLimit) return condition_number(Matrix(a));
  const Eigen::SimplicialLDLT<SparseMatrix> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw NumericalError("condition number: factorization failed");
  return condition_number(a, [&](const Vector& b) -> Vector { return ldlt.solve(b); }, options);
}

}  // namespace sketchfem
