#include <sketchfem/diagnostics.hpp>

#include <sketchfem/assembly.hpp>
#include <sketchfem/eigensolver.hpp>
#include <sketchfem/error.hpp>
#include <sketchfem/rng.hpp>

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>

namespace sketchfem {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kFieldStream = 0xf1e1d;

using Factorization = Eigen::SimplicialLDLT<SparseMatrix>;

Vector checked_solve(const Factorization& ldlt, const SparseMatrix& a, const Vector& b) {
  Vector u = ldlt.solve(b);
  if (ldlt.info() != Eigen::Success) throw NumericalError("reference solve failed");
  const double residual = (a * u - b).norm();
  if (!(residual <= 1e-10 * b.norm())) {
    throw NumericalError("reference solve residual " + std::to_string(residual) + " exceeds 1e-10 ||b||");
  }
  return u;
}

void factorize(Factorization& ldlt, const SparseMatrix& a) {
  ldlt.compute(a);
  if (ldlt.info() != Eigen::Success) throw NumericalError("sparse factorization of A failed");
  if ((ldlt.vectorD().array() <= 0.0).any()) throw NumericalError("A is not positive definite");
}

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.6g", value);
  return buffer;
}

void write_row(std::ostream& out, const std::string& rho, const std::string& c, const ErrorReport& r,
               const std::string& retries) {
  out << rho << ',' << c;
  for (double v : {r.elapsed_s, r.dedup_ratio, r.proj_err, r.sketch_dev, r.reg_err, r.total_err, r.kappa_A,
                   r.kappa_G, r.bound41, r.bound42, r.bound43}) {
    out << ',' << format_number(v);
  }
  out << ',' << retries << '\n';
}

}  // namespace

Vector reference_solve(const SparseMatrix& a, const Vector& b) {
  if (a.rows() != a.cols() || a.rows() != b.size()) throw ValidationError("reference solve: dimension mismatch");
  Factorization ldlt;
  factorize(ldlt, a);
  return checked_solve(ldlt, a, b);
}

double projection_error(const Matrix& basis, const Vector& u) {
  if (basis.rows() != u.size()) throw ValidationError("projection error: dimension mismatch");
  const double norm = u.norm();
  if (norm == 0.0) return 0.0;
  return (u - basis * (basis.transpose() * u)).norm() / norm;
}

double sketch_deviation(const Matrix& g, const Matrix& g_hat) {
  if (g.rows() != g_hat.rows() || g.cols() != g_hat.cols() || g.rows() != g.cols()) {
    throw ValidationError("sketch deviation: dimension mismatch");
  }
  const Eigen::FullPivLU<Matrix> lu(g_hat);
  if (!lu.isInvertible()) return kInf;
  const Matrix deviation = lu.solve(g) - Matrix::Identity(g.rows(), g.cols());
  if (!deviation.allFinite()) return kInf;
  const Eigen::JacobiSVD<Matrix> svd(deviation);
  return svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
}

Matrix reduced_gram(const Matrix& gradient_basis, const Vector& z, int dim) {
  const Vector w = expand_weights(z, dim);
  if (w.size() != gradient_basis.rows()) throw ValidationError("reduced gram: dimension mismatch");
  Matrix g = Matrix::Zero(gradient_basis.cols(), gradient_basis.cols());
  g.selfadjointView<Eigen::Lower>().rankUpdate((w.cwiseSqrt().asDiagonal() * gradient_basis).transpose());
  g.triangularView<Eigen::StrictlyUpper>() = g.transpose();
  return g;
}

Vector projected_solution(const Matrix& basis, const Matrix& g, const Vector& reduced_load) {
  const Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) throw NumericalError("reduced matrix G is not positive definite");
  return basis * llt.solve(reduced_load);
}

TheoremBounds theorem_bounds(double kappa_g, double kappa_a, double epsilon, double proj_err) {
  TheoremBounds b;
  const double sqrt_kg = std::sqrt(kappa_g);
  const double sqrt_ka = std::sqrt(kappa_a);
  const double sketch = epsilon < 1.0 ? sqrt_kg * epsilon / (1.0 - epsilon) : kInf;
  b.thm41 = sketch;
  b.thm42 = (1.0 + sqrt_ka) * proj_err;
  b.cor43 = (1.0 + proj_err * sqrt_ka) * sketch + b.thm42;
  return b;
}

TheoremBounds theorem_bounds(const Matrix& g, const SparseMatrix& a, double epsilon, double proj_err) {
  return theorem_bounds(condition_number(g), condition_number(a), epsilon, proj_err);
}

std::uint64_t field_seed(std::uint64_t base, std::uint64_t t) {
  return derive_seed(query_seed(base, t), kFieldStream);
}

BenchmarkReport run_benchmark(const OnlineSolver& solver, const GradientOperator& op,
                              const FieldGenerator& fields, const Vector& load,
                              const BenchmarkOptions& options) {
  if (options.queries == 0) throw ValidationError("benchmark needs at least one query");
  if (options.c == 0) throw ValidationError("benchmark needs a positive sample size");
  if (load.size() != op.num_interior()) throw ValidationError("load vector does not match the mesh");

  const Matrix& basis = solver.basis();
  const Index rho = solver.rank();
  const double epsilon = options.epsilon > 0.0 ? options.epsilon : implied_epsilon(rho, options.c, options.beta);
  const Matrix gradient_basis = op.interior * basis;

  BenchmarkReport report;
  report.runs.resize(options.queries);

  auto run_one = [&](std::uint64_t t) {
    ErrorReport& row = report.runs[t];
    row.rho = rho;
    row.c = options.c;

    const Vector p = fields.sample(field_seed(options.seed, t));
    const auto ref_start = std::chrono::steady_clock::now();
    const ParameterField field = scaling_vector(op.volumes, p);
    const SparseMatrix a = assemble_stiffness(op, field);
    Factorization ldlt;
    factorize(ldlt, a);
    const Vector u_opt = checked_solve(ldlt, a, load);
    row.reference_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - ref_start).count();

    const Matrix g = reduced_gram(gradient_basis, field.z, op.dim);
    const Vector u_reg = projected_solution(basis, g, solver.reduced_load());
    row.proj_err = projection_error(basis, u_opt);
    row.kappa_G = condition_number(g);
    row.kappa_A = condition_number(a, [&](const Vector& v) { return Vector(ldlt.solve(v)); });
    const TheoremBounds bounds = theorem_bounds(row.kappa_G, row.kappa_A, epsilon, row.proj_err);
    row.bound41 = bounds.thm41;
    row.bound42 = bounds.thm42;
    row.bound43 = bounds.cor43;

    try {
      const QueryResult q = solver.query(p, options.c, query_seed(options.seed, t));
      row.elapsed_s = q.elapsed_s;
      row.retries = q.retries;
      row.dedup_ratio = static_cast<double>(q.distinct) / static_cast<double>(op.num_rows());
      row.sketch_dev = sketch_deviation(g, q.sketch_gram);
      row.reg_err = (q.solution - u_reg).norm() / u_reg.norm();
      row.total_err = (q.solution - u_opt).norm() / u_opt.norm();
    } catch (const SketchSingular&) {
      row.singular = true;
      row.retries = OnlineSolver::kMaxRetries;
      row.sketch_dev = kInf;
      row.reg_err = kInf;
      row.total_err = kInf;
    }
  };

  unsigned workers = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, options.queries));
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::uint64_t t = next++; t < options.queries; t = next++) {
      try {
        run_one(t);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = options.queries;
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ErrorReport& mean = report.mean;
  mean.rho = rho;
  mean.c = options.c;
  Index used = 0;
  for (const ErrorReport& r : report.runs) {
    if (r.singular) {
      ++report.singular_runs;
      continue;
    }
    ++used;
    mean.elapsed_s += r.elapsed_s;
    mean.dedup_ratio += r.dedup_ratio;
    mean.proj_err += r.proj_err;
    mean.sketch_dev += r.sketch_dev;
    mean.reg_err += r.reg_err;
    mean.total_err += r.total_err;
    mean.kappa_A += r.kappa_A;
    mean.kappa_G += r.kappa_G;
    mean.bound41 += r.bound41;
    mean.bound42 += r.bound42;
    mean.bound43 += r.bound43;
    mean.retries += r.retries;
    mean.reference_time_s += r.reference_time_s;
  }
  if (used == 0) {
    mean.singular = true;
    for (double* v : {&mean.sketch_dev, &mean.reg_err, &mean.total_err}) *v = kInf;
    return report;
  }
  const double inv = 1.0 / static_cast<double>(used);
  for (double* v : {&mean.elapsed_s, &mean.dedup_ratio, &mean.proj_err, &mean.sketch_dev, &mean.reg_err,
                    &mean.total_err, &mean.kappa_A, &mean.kappa_G, &mean.bound41, &mean.bound42,
                    &mean.bound43, &mean.retries, &mean.reference_time_s}) {
    *v *= inv;
  }
  return report;
}

void write_csv(std::ostream& out, const BenchmarkReport& report) {
  out << kCsvHeader << '\n';
  for (const ErrorReport& r : report.runs) {
    write_row(out, std::to_string(r.rho), std::to_string(r.c), r,
              std::to_string(static_cast<long long>(r.retries)));
  }
  write_row(out, "MEAN", std::to_string(report.mean.c), report.mean, format_number(report.mean.retries));
}

void write_summary(std::ostream& out, const BenchmarkReport& report) {
  const ErrorReport& m = report.mean;
  char line[512];
  std::snprintf(line, sizeof line, "%6s %10s %10s %8s %10s %10s %10s %10s\n", "rho", "c", "time[s]", "c'/kd",
                "proj_err", "sketch_dev", "reg_err", "total_err");
  out << line;
  std::snprintf(line, sizeof line, "%6lld %10llu %10.3g %8.3g %10.3g %10.3g %10.3g %10.3g\n",
                static_cast<long long>(m.rho), static_cast<unsigned long long>(m.c), m.elapsed_s, m.dedup_ratio,
                m.proj_err, m.sketch_dev, m.reg_err, m.total_err);
  out << line;
  std::snprintf(line, sizeof line, "kappa(A) %.4g  kappa(G) %.4g  bounds %.3g / %.3g / %.3g  reference %.3g s\n",
                m.kappa_A, m.kappa_G, m.bound41, m.bound42, m.bound43, m.reference_time_s);
  out << line;
  out << "runs " << report.runs.size() << ", singular " << report.singular_runs << '\n';
}

}  // namespace sketchfem
