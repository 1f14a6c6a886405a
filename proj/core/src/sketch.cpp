#include <sketchfem/sketch.hpp>

#include <sketchfem/assembly.hpp>
#include <sketchfem/error.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace sketchfem {

std::vector<RowIndex> draw_samples(const AliasTable& sampler, std::uint64_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<RowIndex> out(count);
  for (auto& index : out) index = sampler.draw(rng);
  return out;
}

SampleTab tabulate(std::span<const RowIndex> indices) {
  std::vector<RowIndex> sorted(indices.begin(), indices.end());
  std::sort(sorted.begin(), sorted.end());
  SampleTab tab;
  tab.draws = sorted.size();
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    tab.rows.push_back(sorted[i]);
    tab.counts.push_back(static_cast<std::uint32_t>(j - i));
    i = j;
  }
  return tab;
}

SampleTab tabulate(std::span<const RowIndex> indices, Index num_rows, std::vector<std::uint32_t>& scratch) {
  if (static_cast<Index>(scratch.size()) != num_rows) scratch.assign(static_cast<std::size_t>(num_rows), 0);
  SampleTab tab;
  tab.draws = indices.size();
  for (const RowIndex i : indices) {
    if (static_cast<Index>(i) >= num_rows) {
      std::fill(scratch.begin(), scratch.end(), 0u);
      throw ValidationError("sample index out of range");
    }
    ++scratch[i];
  }
  for (Index i = 0; i < num_rows; ++i) {
    auto& count = scratch[static_cast<std::size_t>(i)];
    if (count != 0) {
      tab.rows.push_back(static_cast<RowIndex>(i));
      tab.counts.push_back(count);
      count = 0;
    }
  }
  return tab;
}

SketchSystem build_sketch_transposed(const RowSparseMatrix& gradients, int dim, const Matrix& basis_t,
                                     const Vector& z, const SampleTab& tab,
                                     const Vector& probabilities) {
  if (gradients.cols() != basis_t.cols()) {
    throw ValidationError("basis has " + std::to_string(basis_t.cols()) + " rows, operator has " +
                          std::to_string(gradients.cols()) + " interior columns");
  }
  if (z.size() * dim != gradients.rows() || probabilities.size() != gradients.rows()) {
    throw ValidationError("scaling or probability vector does not match the operator rows");
  }
  if (tab.rows.size() != tab.counts.size() || tab.draws == 0) {
    throw ValidationError("malformed sample tabulation");
  }

  const Index rho = basis_t.rows();
  const Index distinct = tab.distinct();
  const double c = static_cast<double>(tab.draws);
  SketchSystem sketch;
  sketch.rows_t.setZero(rho, distinct);
  sketch.weights.resize(distinct);
  sketch.scaling.resize(distinct);

  for (Index j = 0; j < distinct; ++j) {
    const RowIndex row = tab.rows[static_cast<std::size_t>(j)];
    const double q = probabilities[row];
    const double zr = z[row / dim];
    if (!(q > 0.0)) throw ValidationError("sampled row " + std::to_string(row) + " has zero probability");
    if (!(zr > 0.0)) throw ValidationError("scaling must be positive at sampled rows");
    const double weight = std::sqrt(tab.counts[static_cast<std::size_t>(j)] / (c * q));
    const double scale = std::sqrt(zr);
    sketch.weights[j] = weight;
    sketch.scaling[j] = scale;

    auto column = sketch.rows_t.col(j);
    for (RowSparseMatrix::InnerIterator it(gradients, row); it; ++it) {
      column.noalias() += it.value() * basis_t.col(it.col());
    }
    column *= weight * scale;
  }

  sketch.gram.setZero(rho, rho);
  sketch.gram.selfadjointView<Eigen::Lower>().rankUpdate(sketch.rows_t);
  sketch.gram = sketch.gram.selfadjointView<Eigen::Lower>();
  return sketch;
}

SketchSystem build_sketch(const GradientOperator& op, const Matrix& basis, const Vector& z,
                          const SampleTab& tab, const Vector& probabilities) {
  return build_sketch_transposed(op.interior, op.dim, basis.transpose(), z, tab, probabilities);
}

Vector solve_reduced(const Matrix& gram, const Vector& rhs) {
  const Index n = gram.rows();
  if (gram.cols() != n || rhs.size() != n) throw ValidationError("reduced system dimension mismatch");
  const double tolerance = 64.0 * std::numeric_limits<double>::epsilon() *
                           std::max(gram.diagonal().cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());

  // Lower-triangular factor, column by column.
  Matrix factor = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    const double pivot = gram(j, j) - factor.row(j).head(j).squaredNorm();
    if (!(pivot > tolerance)) {
      throw SketchSingular("sketched reduced matrix is singular (pivot " + std::to_string(pivot) +
                           " at column " + std::to_string(j) + ")");
    }
    const double root = std::sqrt(pivot);
    factor(j, j) = root;
    for (Index i = j + 1; i < n; ++i) {
      factor(i, j) = (gram(i, j) - factor.row(i).head(j).dot(factor.row(j).head(j))) / root;
    }
  }
  Vector solution = factor.triangularView<Eigen::Lower>().solve(rhs);
  factor.transpose().triangularView<Eigen::Upper>().solveInPlace(solution);
  return solution;
}

std::uint64_t plan_sample_size(Index rho, double epsilon, double beta) {
  if (rho < 1) throw ValidationError("rho must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("epsilon must lie in (0, 1)");
  if (!(beta > 0.0 && beta <= 1.0)) throw ValidationError("beta must lie in (0, 1]");
  const double r = 15.0 * static_cast<double>(rho);
  return static_cast<std::uint64_t>(std::ceil(r * std::log(r) / (beta * epsilon * epsilon)));
}

double implied_epsilon(Index rho, std::uint64_t c, double beta) {
  if (rho < 1 || c == 0) throw ValidationError("rho and c must be positive");
  const double r = 15.0 * static_cast<double>(rho);
  return std::sqrt(r * std::log(r) / (beta * static_cast<double>(c)));
}

OnlineSolver::OnlineSolver(const GradientOperator& op, const OfflineBundle& bundle)
    : dim_(op.dim),
      volumes_(op.volumes),
      gradients_(op.interior),
      basis_(bundle.basis),
      basis_t_(bundle.basis.transpose()),
      reduced_load_(bundle.reduced_load),
      probabilities_(bundle.probabilities),
      sampler_(bundle.probabilities) {
  if (bundle.num_interior() != op.num_interior() || bundle.num_rows() != op.num_rows()) {
    throw ValidationError("offline bundle (n=" + std::to_string(bundle.num_interior()) +
                          ", kd=" + std::to_string(bundle.num_rows()) + ") does not match the mesh (n=" +
                          std::to_string(op.num_interior()) + ", kd=" + std::to_string(op.num_rows()) + ")");
  }
  if (reduced_load_.size() != basis_.cols()) throw ValidationError("reduced load has the wrong length");
}

QueryResult OnlineSolver::query(const Vector& p, std::uint64_t c, std::uint64_t seed) const {
  if (c == 0) throw ValidationError("sample size must be positive");
  const ParameterField field = scaling_vector(volumes_, p);
  thread_local std::vector<std::uint32_t> scratch;

  QueryResult result;
  const auto start = std::chrono::steady_clock::now();
  for (int attempt = 0;; ++attempt) {
    const std::uint64_t attempt_seed = attempt == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(attempt));
    const std::vector<RowIndex> draws = draw_samples(sampler_, c, attempt_seed);
    // Counting pays off once the draws are a fair fraction of the rows.
    SampleTab tab = static_cast<std::uint64_t>(num_rows()) <= 16 * c
                        ? tabulate(draws, num_rows(), scratch)
                        : tabulate(draws);
    tab.seed = attempt_seed;
    SketchSystem sketch = build_sketch_transposed(gradients_, dim_, basis_t_, field.z, tab, probabilities_);
    try {
      result.coefficients = solve_reduced(sketch.gram, reduced_load_);
    } catch (const SketchSingular&) {
      if (attempt >= kMaxRetries) throw;
      ++result.retries;
      continue;
    }
    result.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.sketch_gram = std::move(sketch.gram);
    result.draws = c;
    result.distinct = tab.distinct();
    result.seed = attempt_seed;
    break;
  }
  result.solution = basis_ * result.coefficients;
  return result;
}

}  // namespace sketchfem
