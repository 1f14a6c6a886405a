#pragma once

#include <sketchfem/fields.hpp>
#include <sketchfem/mesh.hpp>
#include <sketchfem/sketch.hpp>
#include <sketchfem/types.hpp>

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace sketchfem {

/// One benchmark row. Singular sketches carry infinite error columns.
struct ErrorReport {
  Index rho = 0;
  std::uint64_t c = 0;
  double elapsed_s = 0.0;       // online time: sampling through reduced solve
  double dedup_ratio = 0.0;     // c' / kd
  double proj_err = 0.0;        // ||u_opt - Pi u_opt|| / ||u_opt||
  double sketch_dev = 0.0;      // ||G-hat^{-1} G - I||_2
  double reg_err = 0.0;         // ||u-hat_reg - u_reg|| / ||u_reg||
  double total_err = 0.0;       // ||u-hat_reg - u_opt|| / ||u_opt||
  double kappa_A = 0.0;
  double kappa_G = 0.0;
  double bound41 = 0.0;
  double bound42 = 0.0;
  double bound43 = 0.0;
  double retries = 0.0;         // integral on per-run rows, averaged on the mean row
  bool singular = false;
  double reference_time_s = 0.0;  // assembly + sparse factorization + solve
};

/// u = A^{-1} b by sparse LDL^T; verifies ||A u - b|| <= 1e-10 ||b||.
Vector reference_solve(const SparseMatrix& a, const Vector& b);

/// ||u - Psi Psi^T u|| / ||u||, zero for u = 0.
double projection_error(const Matrix& basis, const Vector& u);

/// ||G-hat^{-1} G - I||_2; infinite if G-hat is singular.
double sketch_deviation(const Matrix& g, const Matrix& g_hat);

/// G = (D Psi)^T diag(z (x) 1_d) (D Psi) from a precomputed D Psi.
Matrix reduced_gram(const Matrix& gradient_basis, const Vector& z, int dim);

/// u_reg = Psi G^{-1} Psi^T b.
Vector projected_solution(const Matrix& basis, const Matrix& g, const Vector& reduced_load);

struct TheoremBounds {
  double thm41 = 0.0;  // sqrt(kG) eps / (1 - eps)
  double thm42 = 0.0;  // (1 + sqrt(kA)) eps_P
  double cor43 = 0.0;  // (1 + eps_P sqrt(kA)) sqrt(kG) eps / (1 - eps) + (1 + sqrt(kA)) eps_P
};

/// Closed-form bounds; eps >= 1 makes the sketch terms infinite.
TheoremBounds theorem_bounds(double kappa_g, double kappa_a, double epsilon, double proj_err);
TheoremBounds theorem_bounds(const Matrix& g, const SparseMatrix& a, double epsilon, double proj_err);

struct BenchmarkOptions {
  std::uint64_t queries = 100;
  std::uint64_t c = 0;
  std::uint64_t seed = 0;
  /// Epsilon entering the bound columns; defaults to the value implied by
  /// c at `beta`.
  double epsilon = -1.0;
  double beta = kDefaultBeta;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct BenchmarkReport {
  std::vector<ErrorReport> runs;
  ErrorReport mean;  // over non-singular runs
  Index singular_runs = 0;
};

/// Seed of the parameter field drawn for query t.
std::uint64_t field_seed(std::uint64_t base, std::uint64_t t);

/// N field draws, each reference-solved and queried with seed base ^ t.
/// Runs are distributed over threads; the result does not depend on the
/// thread count apart from timing columns.
BenchmarkReport run_benchmark(const OnlineSolver& solver, const GradientOperator& op,
                              const FieldGenerator& fields, const Vector& load,
                              const BenchmarkOptions& options);

inline constexpr const char* kCsvHeader =
    "rho,c,time_s,dedup_ratio,proj_err,sketch_dev,reg_err,total_err,kappa_A,kappa_G,bound41,bound42,"
    "bound43,retries";

/// Per-run rows then a MEAN row (in place of rho), 6 significant digits.
void write_csv(std::ostream& out, const BenchmarkReport& report);

/// The mean row as an aligned table.
void write_summary(std::ostream& out, const BenchmarkReport& report);

}  // namespace sketchfem
