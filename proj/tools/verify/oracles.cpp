#include "verify/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace sketchfem::oracle {

namespace {

Matrix interpolation_matrix(const Matrix& vertices) {
  const Index d = vertices.rows();
  Matrix p(d + 1, d + 1);
  for (Index a = 0; a <= d; ++a) {
    p(a, 0) = 1.0;
    p.block(a, 1, 1, d) = vertices.col(a).transpose();
  }
  return p;
}

}  // namespace

Matrix element_vertices(const Mesh& mesh, Index element) {
  const int d = mesh.dim();
  Matrix v(d, d + 1);
  for (int a = 0; a <= d; ++a) v.col(a) = mesh.vertices().col(mesh.elements()(a, element));
  return v;
}

double simplex_volume(const Matrix& vertices) {
  const Index d = vertices.rows();
  double factorial = 1.0;
  for (Index i = 2; i <= d; ++i) factorial *= static_cast<double>(i);
  return std::abs(interpolation_matrix(vertices).determinant()) / factorial;
}

Matrix interpolation_gradients(const Matrix& vertices) {
  const Index d = vertices.rows();
  // Column a of P^{-1} holds the coefficients (c0, c) of phi_a.
  const Matrix coefficients = interpolation_matrix(vertices).inverse();
  return coefficients.bottomRows(d);
}

std::vector<bool> brute_force_boundary(const Mesh& mesh) {
  const Index k = mesh.num_elements();
  const int d = mesh.dim();
  std::vector<std::set<int>> sets(static_cast<std::size_t>(k));
  for (Index l = 0; l < k; ++l)
    for (int a = 0; a <= d; ++a) sets[static_cast<std::size_t>(l)].insert(mesh.elements()(a, l));

  std::vector<bool> boundary(static_cast<std::size_t>(mesh.num_vertices()), false);
  for (Index l = 0; l < k; ++l) {
    for (int skip = 0; skip <= d; ++skip) {
      std::vector<int> facet;
      for (int a = 0; a <= d; ++a)
        if (a != skip) facet.push_back(mesh.elements()(a, l));
      int containing = 0;
      for (Index m = 0; m < k; ++m) {
        const auto& s = sets[static_cast<std::size_t>(m)];
        if (std::all_of(facet.begin(), facet.end(), [&](int v) { return s.count(v) > 0; })) ++containing;
      }
      if (containing == 1)
        for (int v : facet) boundary[static_cast<std::size_t>(v)] = true;
    }
  }
  return boundary;
}

std::vector<int> interior_numbering(const std::vector<bool>& boundary) {
  std::vector<int> column(boundary.size(), -1);
  int next = 0;
  for (std::size_t v = 0; v < boundary.size(); ++v)
    if (!boundary[v]) column[v] = next++;
  return column;
}

Matrix dense_gradient_operator(const Mesh& mesh) {
  const std::vector<int> column = interior_numbering(brute_force_boundary(mesh));
  const Index n = std::count_if(column.begin(), column.end(), [](int c) { return c >= 0; });
  const int d = mesh.dim();
  Matrix g = Matrix::Zero(mesh.num_elements() * d, n);
  for (Index l = 0; l < mesh.num_elements(); ++l) {
    const Matrix grads = interpolation_gradients(element_vertices(mesh, l));
    for (int a = 0; a <= d; ++a) {
      const int c = column[static_cast<std::size_t>(mesh.elements()(a, l))];
      if (c >= 0) g.block(l * d, c, d, 1) = grads.col(a);
    }
  }
  return g;
}

Matrix element_loop_stiffness(const Mesh& mesh, const Vector& p) {
  const std::vector<int> column = interior_numbering(brute_force_boundary(mesh));
  const Index n = std::count_if(column.begin(), column.end(), [](int c) { return c >= 0; });
  const int d = mesh.dim();
  Matrix a = Matrix::Zero(n, n);
  for (Index l = 0; l < mesh.num_elements(); ++l) {
    const Matrix verts = element_vertices(mesh, l);
    const Matrix grads = interpolation_gradients(verts);
    const double z = simplex_volume(verts) * p[l];
    const Matrix local = z * grads.transpose() * grads;
    for (int i = 0; i <= d; ++i) {
      const int ci = column[static_cast<std::size_t>(mesh.elements()(i, l))];
      if (ci < 0) continue;
      for (int j = 0; j <= d; ++j) {
        const int cj = column[static_cast<std::size_t>(mesh.elements()(j, l))];
        if (cj >= 0) a(ci, cj) += local(i, j);
      }
    }
  }
  return a;
}

Vector element_loop_load(const Mesh& mesh, const Vector& f) {
  const std::vector<int> column = interior_numbering(brute_force_boundary(mesh));
  const Index n = std::count_if(column.begin(), column.end(), [](int c) { return c >= 0; });
  const int d = mesh.dim();
  Vector b = Vector::Zero(n);
  for (Index l = 0; l < mesh.num_elements(); ++l) {
    const double share = f[l] * simplex_volume(element_vertices(mesh, l)) / (d + 1);
    for (int a = 0; a <= d; ++a) {
      const int c = column[static_cast<std::size_t>(mesh.elements()(a, l))];
      if (c >= 0) b[c] += share;
    }
  }
  return b;
}

Vector gram_inverse_leverage(const Matrix& x) {
  const Matrix inv = (x.transpose() * x).inverse();
  Vector l(x.rows());
  for (Index i = 0; i < x.rows(); ++i) l[i] = x.row(i) * inv * x.row(i).transpose();
  return l;
}

Matrix naive_sketch(const Matrix& x, std::span<const RowIndex> draws, const Vector& q) {
  Matrix g = Matrix::Zero(x.cols(), x.cols());
  for (RowIndex i : draws) g += x.row(i).transpose() * x.row(i) / q[i];
  return g / static_cast<double>(draws.size());
}

Matrix selector_sketch(const Matrix& x, std::span<const RowIndex> draws, const Vector& q) {
  const Index c = static_cast<Index>(draws.size());
  Matrix r = Matrix::Zero(x.rows(), c);
  Vector w(c);
  for (Index j = 0; j < c; ++j) {
    r(draws[static_cast<std::size_t>(j)], j) = 1.0;
    w[j] = 1.0 / std::sqrt(static_cast<double>(c) * q[draws[static_cast<std::size_t>(j)]]);
  }
  const Matrix s = r * w.asDiagonal();
  return x.transpose() * s * s.transpose() * x;
}

double spectral_deviation(const Matrix& g, const Matrix& g_hat) {
  const Matrix e = g_hat.inverse() * g - Matrix::Identity(g.rows(), g.cols());
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(e.transpose() * e, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

std::uint64_t planned_sample_size(long rho, long double epsilon, long double beta) {
  const long double r = 15.0L * static_cast<long double>(rho);
  return static_cast<std::uint64_t>(std::ceil(r * std::log(r) / (beta * epsilon * epsilon)));
}

double lumped_l2_norm(const Mesh& mesh, const Vector& vertex_values) {
  const int d = mesh.dim();
  double sum = 0.0;
  for (Index l = 0; l < mesh.num_elements(); ++l) {
    const double share = simplex_volume(element_vertices(mesh, l)) / (d + 1);
    for (int a = 0; a <= d; ++a) {
      const double v = vertex_values[mesh.elements()(a, l)];
      sum += share * v * v;
    }
  }
  return std::sqrt(sum);
}

double chi_square_999(int dof) {
  const double k = dof;
  const double z = 3.090232306167813;  // standard normal 0.999 quantile
  const double t = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
  return k * t * t * t;
}

}  // namespace sketchfem::oracle
