#include "verify/checks.hpp"

#include "verify/oracles.hpp"

#include <sketchfem/alias_table.hpp>
#include <sketchfem/assembly.hpp>
#include <sketchfem/diagnostics.hpp>
#include <sketchfem/eigensolver.hpp>
#include <sketchfem/error.hpp>
#include <sketchfem/fields.hpp>
#include <sketchfem/mesh.hpp>
#include <sketchfem/mesh_builders.hpp>
#include <sketchfem/reduction.hpp>
#include <sketchfem/rng.hpp>
#include <sketchfem/sketch.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>
#include <random>

namespace sketchfem::verify {

namespace {

std::string num(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.3g", v);
  return buffer;
}

Matrix random_matrix(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

Vector random_uniform(Index size, double lo, double hi, Rng& rng) {
  Vector v(size);
  for (Index i = 0; i < size; ++i) v[i] = lo + (hi - lo) * rng.uniform();
  return v;
}

Matrix random_spd(Index n, Rng& rng) {
  const Matrix b = random_matrix(n, n, rng);
  return b * b.transpose() + static_cast<double>(n) * Matrix::Identity(n, n);
}

double relative_max(const Matrix& a, const Matrix& b) {
  const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return scale == 0.0 ? 0.0 : (a - b).cwiseAbs().maxCoeff() / scale;
}

Mesh triangle(double ax, double ay, double bx, double by, double cx, double cy) {
  Matrix v(2, 3);
  v << ax, bx, cx, ay, by, cy;
  Eigen::MatrixXi e(3, 1);
  e << 0, 1, 2;
  return Mesh(2, v, e);
}

// Weighted rows sqrt(z (x) 1_d) D Psi from the dense oracle operator.
Matrix oracle_rows(const Mesh& mesh, const Vector& p, const Matrix& basis) {
  const int d = mesh.dim();
  Vector w(mesh.num_elements() * d);
  for (Index l = 0; l < mesh.num_elements(); ++l) {
    const double z = oracle::simplex_volume(oracle::element_vertices(mesh, l)) * p[l];
    w.segment(l * d, d).setConstant(std::sqrt(z));
  }
  return w.asDiagonal() * (oracle::dense_gradient_operator(mesh) * basis);
}

Matrix sketch_with(const GradientOperator& op, const Matrix& basis, const Vector& z, const Vector& q,
                   std::uint64_t c, std::uint64_t seed) {
  const AliasTable table(q);
  const std::vector<RowIndex> draws = draw_samples(table, c, seed);
  return build_sketch(op, basis, z, tabulate(draws), q).gram;
}

void check_square_interior(Context& ctx) {
  const Mesh mesh = meshes::square(4);
  ctx.require(mesh.num_vertices() == 25 && mesh.num_elements() == 32, "4x4 square has 25 vertices, 32 triangles");
  const std::vector<bool> boundary = oracle::brute_force_boundary(mesh);
  const auto interior = std::count(boundary.begin(), boundary.end(), false);
  ctx.require(interior == 9, "brute force finds " + std::to_string(interior) + " interior vertices");
  ctx.require(mesh.num_interior() == 9, "mesh reports " + std::to_string(mesh.num_interior()));
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    ctx.require(mesh.is_boundary(v) == boundary[static_cast<std::size_t>(v)],
                "boundary flag of vertex " + std::to_string(v));
  }
}

void check_volume_determinant(Context& ctx) {
  const Mesh mesh = triangle(0, 0, 2, 0, 0, 2);
  const double oracle_volume = oracle::simplex_volume(oracle::element_vertices(mesh, 0));
  ctx.require(std::abs(oracle_volume - 2.0) < 1e-15, "oracle volume " + num(oracle_volume));
  ctx.require(std::abs(element_volumes(mesh)[0] - 2.0) < 1e-14, "volume " + num(element_volumes(mesh)[0]));
}

void check_reference_gradients(Context& ctx) {
  const Mesh mesh = triangle(0, 0, 1, 0, 0, 1);
  Matrix expected(2, 3);
  expected << -1, 1, 0, -1, 0, 1;
  const Matrix oracle_grads = oracle::interpolation_gradients(oracle::element_vertices(mesh, 0));
  ctx.require((oracle_grads - expected).cwiseAbs().maxCoeff() < 1e-14, "oracle reproduces hand solution");
  ctx.require((element_gradients(mesh, 0) - expected).cwiseAbs().maxCoeff() < 1e-14,
              "library gradients match (-1,-1), (1,0), (0,1)");
}

void check_scaled_gradients(Context& ctx) {
  const Mesh small = triangle(0.1, 0.2, 1.3, 0.1, 0.4, 0.9);
  const Mesh big = triangle(0.2, 0.4, 2.6, 0.2, 0.8, 1.8);
  const Matrix g_small = element_gradients(small, 0);
  const Matrix g_big = element_gradients(big, 0);
  ctx.require((g_big - 0.5 * g_small).cwiseAbs().maxCoeff() < 1e-14, "gradients halve under x2 scaling");
  ctx.require((g_big - oracle::interpolation_gradients(oracle::element_vertices(big, 0))).cwiseAbs().maxCoeff() <
                  1e-13,
              "scaled gradients match the interpolation oracle");
}

void check_scaling_elementwise(Context& ctx) {
  const Mesh mesh = meshes::square(4, 0.0, 1.0, 0.3, 7);
  Rng rng(11);
  const Vector p = random_uniform(mesh.num_elements(), 0.1, 100.0, rng);
  const ParameterField field = scaling_vector(mesh, p);
  double worst = 0.0;
  for (Index l = 0; l < mesh.num_elements(); ++l) {
    const double z = oracle::simplex_volume(oracle::element_vertices(mesh, l)) * p[l];
    worst = std::max(worst, std::abs(field.z[l] - z) / z);
  }
  ctx.require(worst < 1e-14, "max relative deviation " + num(worst));
}

void check_element_loop_stiffness(Context& ctx) {
  const Mesh mesh = meshes::square(4, 0.0, 1.0, 0.3, 3);
  Rng rng(5);
  const Vector p = random_uniform(mesh.num_elements(), 0.1, 100.0, rng);
  const Matrix a = Matrix(assemble_stiffness(gradient_operator(mesh), scaling_vector(mesh, p)));
  const double dev = relative_max(a, oracle::element_loop_stiffness(mesh, p));
  ctx.require(dev < 1e-12, "relative deviation " + num(dev));
}

void require_five_point_stencil(Context& ctx, const Mesh& mesh, const Matrix& a) {
  const double h = 1.0 / 4.0;
  for (int vi : mesh.interior_vertices()) {
    for (int vj : mesh.interior_vertices()) {
      const Vector delta = mesh.vertices().col(vi) - mesh.vertices().col(vj);
      const bool neighbour = std::abs(delta.norm() - h) < 1e-12;
      const double expected = vi == vj ? 4.0 : (neighbour ? -1.0 : 0.0);
      const double got = a(mesh.interior_column(vi), mesh.interior_column(vj));
      ctx.require(std::abs(got - expected) < 1e-12,
                  "A(" + std::to_string(vi) + "," + std::to_string(vj) + ") = " + num(got));
    }
  }
}

void check_stiffness_stencil(Context& ctx) {
  const Mesh mesh = meshes::square(4);
  const Vector ones = Vector::Ones(mesh.num_elements());
  require_five_point_stencil(ctx, mesh, Matrix(assemble_stiffness(gradient_operator(mesh), scaling_vector(mesh, ones))));
}

void check_laplacian_stencil(Context& ctx) {
  const Mesh mesh = meshes::square(4);
  require_five_point_stencil(ctx, mesh, Matrix(laplacian(gradient_operator(mesh))));
}

void check_shape_integral(Context& ctx) {
  const Mesh mesh = triangle(0, 0, 1, 0, 0, 1);
  const Vector b = assemble_vertex_load(mesh, Vector::Ones(1));
  for (Index i = 0; i < 3; ++i) ctx.require(std::abs(b[i] - 1.0 / 6.0) < 1e-15, "vertex share " + num(b[i]));
  const Mesh square = meshes::square(4, 0.0, 1.0, 0.3, 9);
  Rng rng(2);
  const Vector f = random_uniform(square.num_elements(), -1.0, 1.0, rng);
  const double dev = (assemble_load(square, f).b - oracle::element_loop_load(square, f)).cwiseAbs().maxCoeff();
  ctx.require(dev < 1e-15, "interior load vs element loop " + num(dev));
}

void check_reduced_load(Context& ctx) {
  Rng rng(17);
  const Matrix psi = random_matrix(40, 6, rng);
  const Vector b = random_matrix(40, 1, rng).col(0);
  Vector expected = Vector::Zero(6);
  for (Index j = 0; j < 6; ++j)
    for (Index i = 0; i < 40; ++i) expected[j] += psi(i, j) * b[i];
  const double dev = (reduced_load(psi, b) - expected).cwiseAbs().maxCoeff() / expected.cwiseAbs().maxCoeff();
  ctx.require(dev < 1e-13, "relative deviation " + num(dev));
}

void check_eigenvalue_convergence(Context& ctx) {
  double previous = std::numeric_limits<double>::infinity();
  for (int cells : {5, 10, 15, 20}) {
    const Mesh mesh = meshes::square(cells);
    const SparseMatrix delta = laplacian(gradient_operator(mesh));
    const Eigen::SelfAdjointEigenSolver<Matrix> dense{Matrix(delta), Eigen::EigenvaluesOnly};
    const double lambda = dense.eigenvalues()[0];
    const EigenPairs pairs = smallest_eigenpairs(delta, 1);
    ctx.require(std::abs(pairs.values[0] - lambda) < 1e-10 * lambda, "sparse vs dense smallest eigenvalue");
    const double h = 1.0 / cells;
    const double gap = std::abs(lambda / (h * h) - 2.0 * std::numbers::pi * std::numbers::pi);
    ctx.note("cells " + std::to_string(cells) + ": |lambda/h^2 - 2 pi^2| = " + num(gap));
    ctx.require(gap < previous, "gap decreases at " + std::to_string(cells) + " cells");
    previous = gap;
  }
}

void check_basis_subspace(Context& ctx) {
  const Mesh mesh = meshes::square(12, 0.0, 1.0, 0.25, 21);
  const SparseMatrix delta = laplacian(gradient_operator(mesh));
  ctx.require(delta.rows() <= 300, "n <= 300");
  const Eigen::SelfAdjointEigenSolver<Matrix> dense{Matrix(delta)};
  for (Index rho : {1, 4, 8}) {
    const double gap = dense.eigenvalues()[rho] - dense.eigenvalues()[rho - 1];
    ctx.require(gap > 1e-6 * dense.eigenvalues()[rho], "no degenerate cluster split at rho " + std::to_string(rho));
    const Matrix psi = compute_basis(delta, rho).vectors;
    const Matrix v = dense.eigenvectors().leftCols(rho);
    const Matrix residual = psi - v * (v.transpose() * psi);
    const double sine = Eigen::JacobiSVD<Matrix>(residual).singularValues()[0];
    ctx.require(sine <= 1e-6, "largest principal angle sine " + num(sine) + " at rho " + std::to_string(rho));
  }
}

void check_leverage_gram(Context& ctx) {
  Rng rng(40);
  const Matrix x = random_matrix(40, 5, rng);
  const double dev = (leverage_scores(x) - oracle::gram_inverse_leverage(x)).cwiseAbs().maxCoeff();
  ctx.require(dev < 1e-10, "max deviation " + num(dev));
}

void check_uniform_rows(Context& ctx) {
  const Index rho = 3;
  const Index copies = 5;
  Matrix x(rho * copies, rho);
  for (Index c = 0; c < copies; ++c) x.middleRows(c * rho, rho) = 2.0 * Matrix::Identity(rho, rho);
  const Vector q = sampling_distribution(leverage_scores(x), rho);
  const double dev = (q.array() - 1.0 / static_cast<double>(x.rows())).abs().maxCoeff();
  ctx.require(dev < 1e-15, "q deviates from 1/m by " + num(dev));
}

void check_reweighted(Context& ctx) {
  Rng rng(30);
  const Matrix x = random_matrix(30, 4, rng);
  const double gamma = 0.3;
  double worst = 0.0;
  for (Index i = 0; i < x.rows(); ++i) {
    Matrix scaled = x;
    scaled.row(i) *= std::sqrt(gamma);
    const Vector expected = oracle::gram_inverse_leverage(scaled);
    const ReweightedLeverage got = reweighted_leverage(x, i, gamma);
    worst = std::max(worst, (got.scores - expected).cwiseAbs().maxCoeff());
    worst = std::max(worst, std::abs(got.row_score - expected[i]));
  }
  ctx.require(worst < 1e-10, "max deviation over all rows " + num(worst));
}

void check_bundle_leverage(Context& ctx) {
  const Mesh mesh = meshes::square(6, 0.0, 1.0, 0.2, 4);
  const GradientOperator op = gradient_operator(mesh);
  const OfflineBundle bundle = build_offline_bundle(mesh, op, 5, constant_forcing(mesh));
  const Matrix x = oracle_rows(mesh, Vector::Ones(mesh.num_elements()), bundle.basis);
  const double dev = (bundle.leverage - oracle::gram_inverse_leverage(x)).cwiseAbs().maxCoeff();
  ctx.require(dev < 1e-10, "max deviation " + num(dev));
}

void check_alias_uniform(Context& ctx) {
  const AliasTable table(Vector::Constant(4, 0.25));
  const std::uint64_t c = 1'000'000;
  const std::vector<RowIndex> draws = draw_samples(table, c, 99);
  std::array<double, 4> counts{};
  for (RowIndex i : draws) counts[i] += 1.0;
  const double sigma = std::sqrt(0.25 * 0.75 / static_cast<double>(c));
  for (std::size_t i = 0; i < 4; ++i) {
    const double freq = counts[i] / static_cast<double>(c);
    ctx.require(std::abs(freq - 0.25) <= 3.0 * sigma, "cell " + std::to_string(i) + " frequency " + num(freq));
  }
}

void check_chi_square(Context& ctx) {
  Vector q(10);
  q << 0.3, 0.2, 0.15, 0.1, 0.08, 0.07, 0.05, 0.03, 0.015, 0.005;
  const std::uint64_t c = 100'000;
  const std::vector<RowIndex> draws = draw_samples(AliasTable(q), c, 7);
  Vector counts = Vector::Zero(10);
  for (RowIndex i : draws) counts[i] += 1.0;
  double chi2 = 0.0;
  for (Index i = 0; i < 10; ++i) {
    const double expected = static_cast<double>(c) * q[i];
    chi2 += (counts[i] - expected) * (counts[i] - expected) / expected;
  }
  const double critical = oracle::chi_square_999(9);
  ctx.require(chi2 < critical, "chi2 " + num(chi2) + " vs critical " + num(critical));
}

void check_tabulate(Context& ctx) {
  Rng rng(8);
  std::vector<RowIndex> draws(10'000);
  for (auto& d : draws) d = static_cast<RowIndex>(std::floor(500.0 * rng.uniform() * rng.uniform()));
  std::map<RowIndex, std::uint32_t> oracle_counts;
  for (RowIndex d : draws) ++oracle_counts[d];
  std::vector<std::uint32_t> scratch(500, 0);
  for (const SampleTab& tab : {tabulate(draws), tabulate(draws, 500, scratch)}) {
    ctx.require(tab.rows.size() == oracle_counts.size(), "distinct count");
    std::size_t j = 0;
    for (const auto& [row, count] : oracle_counts) {
      if (j >= tab.rows.size()) break;
      ctx.require(tab.rows[j] == row && tab.counts[j] == count, "entry " + std::to_string(j));
      ++j;
    }
    ctx.require(tab.draws == draws.size(), "draw total");
  }
}

struct SketchFixture {
  Mesh mesh = meshes::square(6, 0.0, 1.0, 0.2, 12);
  GradientOperator op = gradient_operator(mesh);
  OfflineBundle bundle = build_offline_bundle(mesh, op, 6, constant_forcing(mesh));
  Vector p;
  ParameterField field;
  Matrix x;
  std::vector<RowIndex> draws;

  SketchFixture() {
    Rng rng(314);
    p = random_uniform(mesh.num_elements(), 0.1, 100.0, rng);
    field = scaling_vector(mesh, p);
    x = oracle_rows(mesh, p, bundle.basis);
    draws = draw_samples(AliasTable(bundle.probabilities), 2000, 2718);
  }
  Matrix gram() const { return build_sketch(op, bundle.basis, field.z, tabulate(draws), bundle.probabilities).gram; }
};

void check_naive_sum(Context& ctx) {
  const SketchFixture fx;
  const double dev = relative_max(fx.gram(), oracle::naive_sketch(fx.x, fx.draws, fx.bundle.probabilities));
  ctx.require(dev < 1e-12, "relative deviation " + num(dev));
}

void check_selector_form(Context& ctx) {
  const SketchFixture fx;
  const double dev = relative_max(fx.gram(), oracle::selector_sketch(fx.x, fx.draws, fx.bundle.probabilities));
  ctx.require(dev < 1e-12, "relative deviation " + num(dev));
}

void check_solve_reduced(Context& ctx) {
  Rng rng(88);
  const Matrix g = random_spd(8, rng);
  const Vector rhs = random_matrix(8, 1, rng).col(0);
  const Vector expected = g.inverse() * rhs;
  const double dev = (solve_reduced(g, rhs) - expected).norm() / expected.norm();
  ctx.require(dev < 1e-10, "relative deviation " + num(dev));
}

void check_query_full_rank(Context& ctx) {
  const Mesh mesh = meshes::square(4);
  const GradientOperator op = gradient_operator(mesh);
  const Index n = mesh.num_interior();
  const OfflineBundle bundle = build_offline_bundle(mesh, op, n, constant_forcing(mesh));
  const OnlineSolver solver(op, bundle);
  const Vector ones = Vector::Ones(mesh.num_elements());
  const Vector u = oracle::element_loop_stiffness(mesh, ones).ldlt().solve(oracle::element_loop_load(mesh, ones));
  double previous = std::numeric_limits<double>::infinity();
  for (std::uint64_t c : {1'000ULL, 1'000'000ULL}) {
    const double err = (solver.query(ones, c, 5).solution - u).norm() / u.norm();
    ctx.note("c = " + std::to_string(c) + ": relative error " + num(err));
    ctx.require(err < previous, "error decreases with c");
    previous = err;
  }
  ctx.require(previous < 0.05, "relative error at c = 1e6 below 0.05");
}

void check_plan_sample_size(Context& ctx) {
  const std::uint64_t expected = oracle::planned_sample_size(50, 0.1L, 1.0L);
  ctx.require(expected == 496'506, "oracle gives " + std::to_string(expected));
  ctx.require(plan_sample_size(50, 0.1, 1.0) == expected, "plan_sample_size(50, 0.1, 1)");
}

void check_plan_beta_half(Context& ctx) {
  const std::uint64_t expected = oracle::planned_sample_size(50, 0.1L, 0.5L);
  ctx.require(expected == 993'011, "oracle gives " + std::to_string(expected));
  ctx.require(plan_sample_size(50, 0.1, 0.5) == expected, "plan_sample_size(50, 0.1, 0.5)");
  ctx.require(plan_sample_size(50, 0.1) == expected, "default beta is 0.5");
}

void check_uniform_clt(Context& ctx) {
  const Index k = 100'000;
  const double lo = 0.1;
  const double hi = 100.0;
  const Vector p = uniform_field(k, lo, hi, 123);
  const double sigma = (hi - lo) / std::sqrt(12.0 * static_cast<double>(k));
  ctx.require(std::abs(p.mean() - 0.5 * (lo + hi)) <= 3.0 * sigma, "mean " + num(p.mean()));
  ctx.require(p.minCoeff() >= lo && p.maxCoeff() <= hi, "range");
}

void check_matern_exponential(Context& ctx) {
  Rng rng(1);
  const std::vector<double> m_diag{0.04, 0.09, 0.25};
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Vector x = random_matrix(3, 1, rng).col(0);
    const Vector y = random_matrix(3, 1, rng).col(0);
    double r2 = 0.0;
    for (int i = 0; i < 3; ++i) r2 += (x[i] - y[i]) * (x[i] - y[i]) / m_diag[static_cast<std::size_t>(i)];
    const double expected = 2.5 * std::exp(-std::sqrt(r2));
    worst = std::max(worst, std::abs(matern_covariance(x, y, 0.5, m_diag, 2.5) - expected) / expected);
  }
  ctx.require(worst < 1e-12, "max relative deviation " + num(worst));
}

void check_lognormal_covariance(Context& ctx) {
  const Mesh mesh = meshes::square(6);
  const std::vector<double> m_diag{0.04, 0.04};
  const double nu = 7.5;
  const LognormalField field(mesh, nu, m_diag, 1.0, mesh.num_elements());
  const int draws = 2000;
  Matrix logs(mesh.num_elements(), draws);
  for (int s = 0; s < draws; ++s) logs.col(s) = field.sample(derive_seed(77, static_cast<std::uint64_t>(s))).array().log().matrix();
  Rng rng(6);
  const Matrix centroids = mesh.centroids();
  for (int t = 0; t < 10; ++t) {
    const auto i = static_cast<Index>(rng() % static_cast<std::uint64_t>(mesh.num_elements()));
    const auto j = static_cast<Index>(rng() % static_cast<std::uint64_t>(mesh.num_elements()));
    const double cij = matern_covariance(centroids.col(i), centroids.col(j), nu, m_diag, 1.0);
    const double cii = matern_covariance(centroids.col(i), centroids.col(i), nu, m_diag, 1.0);
    const double cjj = matern_covariance(centroids.col(j), centroids.col(j), nu, m_diag, 1.0);
    const double estimate = logs.row(i).dot(logs.row(j)) / draws;
    const double sigma = std::sqrt((cii * cjj + cij * cij) / draws);
    ctx.require(std::abs(estimate - cij) <= 3.0 * sigma,
                "pair (" + std::to_string(i) + "," + std::to_string(j) + "): " + num(estimate) + " vs " + num(cij));
  }
}

void check_disk_poisson(Context& ctx) {
  double previous = std::numeric_limits<double>::infinity();
  for (int rings : {4, 8, 16}) {
    const Mesh mesh = meshes::disk(rings, 1.0);
    const GradientOperator op = gradient_operator(mesh);
    const Vector ones = Vector::Ones(mesh.num_elements());
    const Vector u = reference_solve(assemble_stiffness(op, scaling_vector(mesh, ones)), assemble_load(mesh, ones).b);
    Vector nodal = Vector::Zero(mesh.num_vertices());
    Vector exact(mesh.num_vertices());
    for (Index v = 0; v < mesh.num_vertices(); ++v) {
      exact[v] = (1.0 - mesh.vertices().col(v).squaredNorm()) / 4.0;
      if (!mesh.is_boundary(v)) nodal[v] = u[mesh.interior_column(v)];
    }
    const double err = oracle::lumped_l2_norm(mesh, nodal - exact) / oracle::lumped_l2_norm(mesh, exact);
    ctx.note(std::to_string(rings) + " rings: relative L2 error " + num(err));
    ctx.require(err < previous, "error decreases at " + std::to_string(rings) + " rings");
    previous = err;
  }
}

void check_projection_dense(Context& ctx) {
  Rng rng(12);
  const Matrix psi = Eigen::HouseholderQR<Matrix>(random_matrix(50, 6, rng)).householderQ() * Matrix::Identity(50, 6);
  const Vector u = random_matrix(50, 1, rng).col(0);
  const Matrix projector = psi * psi.transpose();
  const double expected = ((Matrix::Identity(50, 50) - projector) * u).norm() / u.norm();
  const double dev = std::abs(projection_error(psi, u) - expected);
  ctx.require(dev < 1e-12, "deviation " + num(dev));
}

void check_deviation_oracle(Context& ctx) {
  Rng rng(13);
  for (int t = 0; t < 20; ++t) {
    const Matrix g = random_spd(6, rng);
    const Matrix g_hat = random_spd(6, rng);
    const double expected = oracle::spectral_deviation(g, g_hat);
    const double dev = std::abs(sketch_deviation(g, g_hat) - expected) / expected;
    ctx.require(dev < 1e-10, "trial " + std::to_string(t) + " relative deviation " + num(dev));
  }
}

// Exact-leverage sampling (beta = 1) at the planned sample size.
void check_bounds_dominate(Context& ctx) {
  const Mesh mesh = meshes::square(8, 0.0, 1.0, 0.2, 31);
  const GradientOperator op = gradient_operator(mesh);
  const Index rho = 6;
  const OfflineBundle bundle = build_offline_bundle(mesh, op, rho, constant_forcing(mesh));
  const Vector b = assemble_load(mesh, constant_forcing(mesh)).b;
  Rng rng(55);
  const Vector p = random_uniform(mesh.num_elements(), 0.1, 100.0, rng);
  const ParameterField field = scaling_vector(mesh, p);
  const Matrix a = oracle::element_loop_stiffness(mesh, p);
  const Vector u_opt = a.ldlt().solve(b);
  const Matrix x = oracle_rows(mesh, p, bundle.basis);
  const Matrix g = x.transpose() * x;
  const Vector u_reg = bundle.basis * g.ldlt().solve(bundle.reduced_load);
  const Vector q = sampling_distribution(oracle::gram_inverse_leverage(x), rho);

  const double epsilon = 0.3;
  const std::uint64_t c = plan_sample_size(rho, epsilon, 1.0);
  const double proj = ((Matrix::Identity(a.rows(), a.rows()) - bundle.basis * bundle.basis.transpose()) * u_opt).norm() / u_opt.norm();
  const TheoremBounds bounds = theorem_bounds(condition_number(g), condition_number(a), epsilon, proj);
  ctx.require((u_opt - u_reg).norm() / u_opt.norm() <= bounds.thm42, "projection bound");
  int violations = 0;
  for (std::uint64_t t = 0; t < 200; ++t) {
    try {
      const Matrix g_hat = sketch_with(op, bundle.basis, field.z, q, c, query_seed(900, t));
      const Vector u_hat = bundle.basis * solve_reduced(g_hat, bundle.reduced_load);
      const bool ok = (u_hat - u_reg).norm() / u_reg.norm() <= bounds.thm41 &&
                      (u_hat - u_opt).norm() / u_opt.norm() <= bounds.cor43;
      if (!ok) ++violations;
    } catch (const SketchSingular&) {
      ++violations;
    }
  }
  ctx.note("c = " + std::to_string(c) + ", bound41 " + num(bounds.thm41) + ", bound43 " + num(bounds.cor43));
  ctx.require(violations == 0, std::to_string(violations) + " of 200 sketches exceed a bound");
}

void check_triangle_rows(Context& ctx) {
  const Mesh mesh = meshes::square(8, 0.0, 1.0, 0.2, 32);
  const GradientOperator op = gradient_operator(mesh);
  const Vector f = constant_forcing(mesh);
  const OfflineBundle bundle = build_offline_bundle(mesh, op, 8, f);
  const OnlineSolver solver(op, bundle);
  const Vector b = assemble_load(mesh, f).b;
  for (std::uint64_t t = 0; t < 20; ++t) {
    const Vector p = uniform_field(mesh.num_elements(), 0.1, 100.0, t);
    const Matrix a = oracle::element_loop_stiffness(mesh, p);
    const Vector u_opt = a.ldlt().solve(b);
    const Matrix x = oracle_rows(mesh, p, bundle.basis);
    const Vector u_reg = bundle.basis * (x.transpose() * x).ldlt().solve(bundle.reduced_load);
    const Vector u_hat = solver.query(p, 2000, t).solution;
    const double proj = projection_error(bundle.basis, u_opt);
    const double reg = (u_hat - u_reg).norm() / u_reg.norm();
    const double total = (u_hat - u_opt).norm() / u_opt.norm();
    const double bound = reg * u_reg.norm() / u_opt.norm() + proj * (1.0 + std::sqrt(condition_number(a)));
    ctx.require(total <= bound * (1.0 + 1e-12), "row " + std::to_string(t) + ": " + num(total) + " > " + num(bound));
  }
}

void check_deviation_trend(Context& ctx) {
  const Mesh mesh = meshes::square(8, 0.0, 1.0, 0.2, 33);
  const GradientOperator op = gradient_operator(mesh);
  const Vector f = constant_forcing(mesh);
  const OfflineBundle bundle = build_offline_bundle(mesh, op, 6, f);
  const OnlineSolver solver(op, bundle);
  const FieldGenerator fields(mesh, FieldSpec{});
  const Vector b = assemble_load(mesh, f).b;
  double previous = std::numeric_limits<double>::infinity();
  for (std::uint64_t c : {1000ULL, 2000ULL, 4000ULL}) {
    BenchmarkOptions options;
    options.queries = 100;
    options.c = c;
    options.seed = 4242;
    options.threads = 1;
    const BenchmarkReport report = run_benchmark(solver, op, fields, b, options);
    ctx.note("c = " + std::to_string(c) + ": mean sketch_dev " + num(report.mean.sketch_dev));
    ctx.require(report.mean.sketch_dev < previous, "mean sketch_dev decreases at c = " + std::to_string(c));
    previous = report.mean.sketch_dev;
  }
}

void check_lemma_identity(Context& ctx) {
  const SketchFixture fx;
  const Matrix g = fx.x.transpose() * fx.x;
  const Matrix g_hat = fx.gram();
  const Matrix& psi = fx.bundle.basis;
  const Vector u_reg = psi * g.inverse() * fx.bundle.reduced_load;
  const Vector u_hat = psi * g_hat.inverse() * fx.bundle.reduced_load;
  const Vector rhs = psi * (g_hat.inverse() * g - Matrix::Identity(g.rows(), g.cols())) * psi.transpose() * u_reg;
  const double dev = ((u_hat - u_reg) - rhs).norm() / u_reg.norm();
  ctx.require(dev < 1e-10, "relative deviation " + num(dev));
}

void check_projection_theorem(Context& ctx) {
  for (std::uint64_t t = 0; t < 10; ++t) {
    const Mesh mesh = meshes::square(8, 0.0, 1.0, 0.3, 100 + t);
    const GradientOperator op = gradient_operator(mesh);
    const Vector f = constant_forcing(mesh);
    const Index rho = t % 2 == 0 ? 5 : 20;
    const OfflineBundle bundle = build_offline_bundle(mesh, op, rho, f);
    const Vector p = uniform_field(mesh.num_elements(), 0.1, 100.0, t);
    const Matrix a = oracle::element_loop_stiffness(mesh, p);
    const Vector u_opt = a.ldlt().solve(oracle::element_loop_load(mesh, f));
    const Matrix x = oracle_rows(mesh, p, bundle.basis);
    const Vector u_reg = bundle.basis * (x.transpose() * x).ldlt().solve(bundle.reduced_load);
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(a, Eigen::EigenvaluesOnly);
    const double kappa = eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff();
    const double proj = ((Matrix::Identity(a.rows(), a.rows()) - bundle.basis * bundle.basis.transpose()) * u_opt).norm();
    ctx.require((u_opt - u_reg).norm() <= (1.0 + std::sqrt(kappa)) * proj, "instance " + std::to_string(t));
  }
}

}  // namespace

void Context::require(bool ok, const std::string& what) {
  if (!ok) failures_.push_back(what);
}

void Context::note(const std::string& text) { notes_.push_back(text); }

const std::vector<Check>& oracle_checks() {
  static const std::vector<Check> checks = {
      {"mesh.square_interior_count", check_square_interior},
      {"mesh.volume_determinant", check_volume_determinant},
      {"mesh.reference_gradients", check_reference_gradients},
      {"mesh.scaled_gradients", check_scaled_gradients},
      {"assembly.scaling_elementwise", check_scaling_elementwise},
      {"assembly.element_loop_stiffness", check_element_loop_stiffness},
      {"assembly.five_point_stencil", check_stiffness_stencil},
      {"assembly.shape_function_integral", check_shape_integral},
      {"assembly.reduced_load_dense", check_reduced_load},
      {"reduction.laplacian_stencil", check_laplacian_stencil},
      {"reduction.eigenvalue_convergence", check_eigenvalue_convergence},
      {"reduction.basis_subspace_dense", check_basis_subspace},
      {"reduction.leverage_gram_inverse", check_leverage_gram},
      {"reduction.uniform_row_distribution", check_uniform_rows},
      {"reduction.reweighted_recompute", check_reweighted},
      {"reduction.bundle_leverage", check_bundle_leverage},
      {"sketch.alias_uniform_frequencies", check_alias_uniform},
      {"sketch.draw_chi_square", check_chi_square},
      {"sketch.tabulate_counting", check_tabulate},
      {"sketch.naive_sum_form", check_naive_sum},
      {"sketch.selector_form", check_selector_form},
      {"sketch.lemma_identity", check_lemma_identity},
      {"sketch.solve_dense_inverse", check_solve_reduced},
      {"sketch.query_full_rank_convergence", check_query_full_rank},
      {"sketch.plan_sample_size", check_plan_sample_size},
      {"fields.uniform_mean", check_uniform_clt},
      {"fields.matern_exponential", check_matern_exponential},
      {"fields.lognormal_covariance", check_lognormal_covariance},
      {"diagnostics.disk_poisson_convergence", check_disk_poisson},
      {"diagnostics.projection_dense", check_projection_dense},
      {"diagnostics.sketch_deviation_dense", check_deviation_oracle},
      {"diagnostics.projection_theorem", check_projection_theorem},
      {"diagnostics.bounds_dominate", check_bounds_dominate},
      {"diagnostics.triangle_inequality_rows", check_triangle_rows},
      {"diagnostics.sketch_deviation_trend", check_deviation_trend},
      {"cli.planned_sample_size_beta_half", check_plan_beta_half},
  };
  return checks;
}

CheckResult run_check(const Check& check) {
  CheckResult result;
  result.name = check.name;
  Context ctx;
  const auto start = std::chrono::steady_clock::now();
  try {
    check.body(ctx);
  } catch (const std::exception& e) {
    ctx.require(false, std::string("exception: ") + e.what());
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.passed = ctx.passed();
  std::string detail;
  for (const std::string& f : ctx.failures()) detail += (detail.empty() ? "" : "; ") + f;
  if (result.passed) {
    for (const std::string& n : ctx.notes()) detail += (detail.empty() ? "" : "; ") + n;
  }
  result.detail = std::move(detail);
  return result;
}

int run_checks(std::ostream& out, std::string_view filter) {
  int failures = 0;
  int ran = 0;
  for (const Check& check : oracle_checks()) {
    if (!filter.empty() && check.name.find(filter) == std::string::npos) continue;
    const CheckResult r = run_check(check);
    ++ran;
    if (!r.passed) ++failures;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", r.seconds);
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << timing << ")";
    if (!r.detail.empty()) out << "  " << r.detail;
    out << '\n';
  }
  out << ran - failures << '/' << ran << " checks passed\n";
  return failures;
}

}  // namespace sketchfem::verify
