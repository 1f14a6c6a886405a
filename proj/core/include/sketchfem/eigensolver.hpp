#pragma once

#include <sketchfem/types.hpp>

#include <cstdint>
#include <functional>

namespace sketchfem {

struct EigensolverOptions {
  /// Required residual ||A v - lambda v|| for unit v.
  double tolerance = 1e-8;
  int max_restarts = 60;
  /// Krylov blocks generated per restart.
  int krylov_blocks = 4;
  /// Extra block columns beyond the requested count.
  Index oversample = 8;
  std::uint64_t seed = 0x5eed'b10c'c0de'0001ULL;
};

struct EigenPairs {
  Matrix vectors;    // n x count, orthonormal columns
  Vector values;     // ascending
  Vector residuals;  // ||A v_j - lambda_j v_j||
  int restarts = 0;
};

/// Smallest `count` eigenpairs of a sparse SPD matrix.
///
/// Block Krylov subspaces of A^{-1} (one sparse Cholesky factorization) are
/// built with full reorthogonalization and projected onto A (Rayleigh-Ritz);
/// the leading Ritz block seeds the next restart. A block wider than
/// `count` resolves degenerate clusters. Each eigenvector is sign-normalized
/// so that its largest-magnitude entry is positive.
EigenPairs smallest_eigenpairs(const SparseMatrix& a, Index count,
                               const EigensolverOptions& options = {});

using LinearOperator = std::function<void(const Vector& in, Vector& out)>;

struct LanczosOptions {
  double tolerance = 1e-6;  // relative change of the extreme Ritz value
  int max_iterations = 400;
  std::uint64_t seed = 0x1a2c'205e'ed00'0001ULL;
};

/// Largest eigenvalue of a symmetric positive semidefinite operator by plain
/// Lanczos (no reorthogonalization; ghosts do not move the extreme value).
double largest_eigenvalue(const LinearOperator& op, Index n, const LanczosOptions& options = {});

/// lambda_max / lambda_min of a dense SPD matrix.
double condition_number(const Matrix& a);

/// Condition number of a sparse SPD matrix. Dense eigenvalues for n <= 500,
/// otherwise Lanczos on A and on A^{-1} through `solve`.
double condition_number(const SparseMatrix& a, const std::function<Vector(const Vector&)>& solve,
                        const LanczosOptions& options = {});

/// As above, factorizing A internally when n > 500.
double condition_number(const SparseMatrix& a, const LanczosOptions& options = {});

}  // namespace sketchfem
