#include <sketchfem/alias_table.hpp>
#include <sketchfem/assembly.hpp>
#include <sketchfem/diagnostics.hpp>
#include <sketchfem/error.hpp>
#include <sketchfem/fields.hpp>
#include <sketchfem/mesh_builders.hpp>
#include <sketchfem/reduction.hpp>
#include <sketchfem/sketch.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <thread>

namespace sketchfem {
namespace {

TEST(AliasTable, DegenerateDistributions) {
  Vector q(3);
  q << 1.0, 0.0, 0.0;
  for (RowIndex i : draw_samples(AliasTable(q), 1000, 1)) EXPECT_EQ(i, 0u);

  Vector half(4);
  half << 0.5, 0.5, 0.0, 0.0;
  for (RowIndex i : draw_samples(AliasTable(half), 10000, 2)) EXPECT_LT(i, 2u);
}

TEST(AliasTable, ReconstructsProbabilities) {
  Vector q(5);
  q << 0.1, 0.4, 0.0, 0.3, 0.2;
  const AliasTable table(q);
  for (Index i = 0; i < 5; ++i) EXPECT_NEAR(table.probability(i), q[i], 1e-15);
}

TEST(AliasTable, RejectsInvalidDistributions) {
  EXPECT_THROW(AliasTable(Vector::Constant(3, 0.5)), ValidationError);
  Vector q(2);
  q << 1.5, -0.5;
  EXPECT_THROW(AliasTable{q}, ValidationError);
  EXPECT_THROW(AliasTable{Vector{}}, ValidationError);
}

TEST(DrawSamples, ReproducibleAndInRange) {
  const AliasTable table(Vector::Constant(10, 0.1));
  EXPECT_EQ(draw_samples(table, 500, 42), draw_samples(table, 500, 42));
  EXPECT_NE(draw_samples(table, 500, 42), draw_samples(table, 500, 43));
  const auto one = draw_samples(table, 1, 7);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_LT(one[0], 10u);
}

TEST(Tabulate, SmallExamples) {
  const std::vector<RowIndex> draws{3, 3, 1};
  const SampleTab tab = tabulate(draws);
  EXPECT_EQ(tab.rows, (std::vector<RowIndex>{1, 3}));
  EXPECT_EQ(tab.counts, (std::vector<std::uint32_t>{1, 2}));
  EXPECT_EQ(tab.draws, 3u);
  const std::vector<RowIndex> same(50, 9);
  EXPECT_EQ(tabulate(same).distinct(), 1);
}

TEST(Tabulate, CountingVariantMatchesAndResetsScratch) {
  const std::vector<RowIndex> draws = draw_samples(AliasTable(Vector::Constant(20, 0.05)), 300, 5);
  std::vector<std::uint32_t> scratch(20, 0);
  const SampleTab a = tabulate(draws);
  const SampleTab b = tabulate(draws, 20, scratch);
  EXPECT_EQ(a.rows, b.rows);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_TRUE(std::all_of(scratch.begin(), scratch.end(), [](auto c) { return c == 0; }));
  const std::vector<RowIndex> bad{1, 25};
  EXPECT_THROW(tabulate(bad, 20, scratch), ValidationError);
  EXPECT_TRUE(std::all_of(scratch.begin(), scratch.end(), [](auto c) { return c == 0; }));
}

struct Instance {
  Mesh mesh = meshes::square(5, 0.0, 1.0, 0.2, 6);
  GradientOperator op = gradient_operator(mesh);
  OfflineBundle bundle = build_offline_bundle(mesh, op, mesh.num_interior(), constant_forcing(mesh));
};

TEST(BuildSketch, FullUniformSampleIsExact) {
  const Instance in;
  const Index kd = in.op.num_rows();
  const Vector p = uniform_field(in.mesh.num_elements(), 0.1, 100.0, 3);
  const ParameterField field = scaling_vector(in.mesh, p);
  const Vector q = Vector::Constant(kd, 1.0 / static_cast<double>(kd));
  SampleTab tab;
  for (Index i = 0; i < kd; ++i) {
    tab.rows.push_back(static_cast<RowIndex>(i));
    tab.counts.push_back(3);
  }
  tab.draws = 3 * static_cast<std::uint64_t>(kd);
  const SketchSystem sketch = build_sketch(in.op, in.bundle.basis, field.z, tab, q);
  EXPECT_LT((sketch.weights.array() - 1.0).abs().maxCoeff(), 1e-15);
  const Matrix g = reduced_gram(in.op.interior * in.bundle.basis, field.z, 2);
  EXPECT_LT((sketch.gram - g).cwiseAbs().maxCoeff(), 1e-12 * g.cwiseAbs().maxCoeff());
  EXPECT_EQ(sketch.gram, sketch.gram.transpose());

  // No projection and no sketching error: the reduced solve is the FEM solution.
  const Vector u = reference_solve(assemble_stiffness(in.op, field), assemble_load(in.mesh, constant_forcing(in.mesh)).b);
  const Vector u_hat = in.bundle.basis * solve_reduced(sketch.gram, in.bundle.reduced_load);
  EXPECT_LT((u_hat - u).norm(), 1e-8 * u.norm());
}

TEST(BuildSketch, WeightsAndScaling) {
  const Instance in;
  const Vector p = uniform_field(in.mesh.num_elements(), 0.1, 100.0, 4);
  const ParameterField field = scaling_vector(in.mesh, p);
  const auto draws = draw_samples(AliasTable(in.bundle.probabilities), 400, 9);
  const SampleTab tab = tabulate(draws);
  const SketchSystem s = build_sketch(in.op, in.bundle.basis, field.z, tab, in.bundle.probabilities);
  ASSERT_EQ(s.rows_t.cols(), tab.distinct());
  for (Index j = 0; j < tab.distinct(); ++j) {
    const RowIndex row = tab.rows[static_cast<std::size_t>(j)];
    EXPECT_NEAR(s.weights[j] * s.weights[j], tab.counts[static_cast<std::size_t>(j)] / (400.0 * in.bundle.probabilities[row]), 1e-12);
    EXPECT_NEAR(s.scaling[j] * s.scaling[j], field.z[row / 2], 1e-15);
  }
  EXPECT_LT((s.gram - s.rows().transpose() * s.rows()).cwiseAbs().maxCoeff(), 1e-12 * s.gram.cwiseAbs().maxCoeff());
}

TEST(BuildSketch, RejectsNonpositiveScaling) {
  const Instance in;
  const auto draws = draw_samples(AliasTable(in.bundle.probabilities), 50, 1);
  Vector z = Vector::Zero(in.mesh.num_elements());
  EXPECT_THROW(build_sketch(in.op, in.bundle.basis, z, tabulate(draws), in.bundle.probabilities), ValidationError);
}

TEST(SolveReduced, SmallSystems) {
  const Vector rhs = Vector::LinSpaced(3, 1.0, 3.0);
  EXPECT_LT((solve_reduced(Matrix::Identity(3, 3), rhs) - rhs).norm(), 1e-15);
  Matrix g = Matrix::Zero(2, 2);
  g(0, 0) = 2.0;
  g(1, 1) = 4.0;
  Vector b(2);
  b << 2.0, 8.0;
  const Vector r = solve_reduced(g, b);
  EXPECT_DOUBLE_EQ(r[0], 1.0);
  EXPECT_DOUBLE_EQ(r[1], 2.0);
}

TEST(SolveReduced, SingularRaises) {
  Matrix g = Matrix::Ones(3, 3);
  EXPECT_THROW(solve_reduced(g, Vector::Ones(3)), SketchSingular);
  g = -Matrix::Identity(2, 2);
  EXPECT_THROW(solve_reduced(g, Vector::Ones(2)), SketchSingular);
}

TEST(OnlineQuery, DeterministicForFixedSeed) {
  const Mesh mesh = meshes::square(6, 0.0, 1.0, 0.2, 1);
  const GradientOperator op = gradient_operator(mesh);
  const OfflineBundle bundle = build_offline_bundle(mesh, op, 6, constant_forcing(mesh));
  const OnlineSolver solver(op, bundle);
  const Vector p = uniform_field(mesh.num_elements(), 0.1, 100.0, 8);
  const QueryResult a = solver.query(p, 3000, 77);
  const QueryResult b = solver.query(p, 3000, 77);
  EXPECT_EQ(a.coefficients, b.coefficients);
  EXPECT_EQ(a.sketch_gram, b.sketch_gram);
  EXPECT_EQ(a.distinct, b.distinct);
  EXPECT_LT((a.solution - bundle.basis * a.coefficients).norm(), 1e-13 * a.solution.norm());
  EXPECT_LE(a.distinct, static_cast<Index>(std::min<std::uint64_t>(3000, static_cast<std::uint64_t>(op.num_rows()))));

  QueryResult threaded;
  std::thread([&] { threaded = solver.query(p, 3000, 77); }).join();
  EXPECT_EQ(threaded.coefficients, a.coefficients);
}

TEST(OnlineQuery, SingularAfterRetries) {
  const Mesh mesh = meshes::square(4);
  const GradientOperator op = gradient_operator(mesh);
  const OfflineBundle bundle = build_offline_bundle(mesh, op, 4, constant_forcing(mesh));
  const OnlineSolver solver(op, bundle);
  EXPECT_THROW(solver.query(Vector::Ones(mesh.num_elements()), 1, 5), SketchSingular);
}

TEST(OnlineQuery, RejectsMismatchedBundle) {
  const Mesh small = meshes::square(4);
  const Mesh large = meshes::square(5);
  const OfflineBundle bundle = build_offline_bundle(small, gradient_operator(small), 3, constant_forcing(small));
  EXPECT_THROW(OnlineSolver(gradient_operator(large), bundle), ValidationError);
}

TEST(PlanSampleSize, Scaling) {
  const std::uint64_t base = plan_sample_size(10, 0.4, 1.0);
  const std::uint64_t fine = plan_sample_size(10, 0.2, 1.0);
  EXPECT_LE(std::llabs(static_cast<long long>(fine) - 4 * static_cast<long long>(base)), 4);
  EXPECT_EQ(plan_sample_size(10, 0.999999999, 1.0), static_cast<std::uint64_t>(std::ceil(150.0 * std::log(150.0))));
  EXPECT_EQ(plan_sample_size(50, 0.1, 1.0), 496'506u);
  EXPECT_EQ(plan_sample_size(50, 0.1), 993'011u);
}

TEST(PlanSampleSize, RejectsOutOfRange) {
  EXPECT_THROW(plan_sample_size(10, 0.0), ValidationError);
  EXPECT_THROW(plan_sample_size(10, 1.0), ValidationError);
  EXPECT_THROW(plan_sample_size(10, 0.1, 0.0), ValidationError);
  EXPECT_THROW(plan_sample_size(10, 0.1, 1.5), ValidationError);
  EXPECT_THROW(plan_sample_size(0, 0.1), ValidationError);
}

TEST(PlanSampleSize, ImpliedEpsilonInvertsPlan) {
  const std::uint64_t c = plan_sample_size(20, 0.25, 0.5);
  EXPECT_LE(implied_epsilon(20, c, 0.5), 0.25);
  EXPECT_GT(implied_epsilon(20, c - 1, 0.5), 0.25);
}

}  // namespace
}  // namespace sketchfem
