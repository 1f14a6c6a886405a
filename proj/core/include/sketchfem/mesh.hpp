#pragma once

#include <sketchfem/types.hpp>

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace sketchfem {

/// Simplicial mesh (triangles for dim 2, tetrahedra for dim 3).
///
/// Vertices are classified by facet incidence: a facet that belongs to
/// exactly one element lies on the boundary, and so do its vertices. All
/// other vertices are interior and are numbered 0..n-1 in ascending global
/// id order. Instances are validated on construction and immutable.
class Mesh {
 public:
  /// `vertices` is dim x nv (one column per vertex), `elements` is
  /// (dim+1) x k with 0-based vertex ids.
  Mesh(int dim, Matrix vertices, Eigen::MatrixXi elements);

  int dim() const { return dim_; }
  Index num_vertices() const { return vertices_.cols(); }
  Index num_elements() const { return elements_.cols(); }
  Index num_interior() const { return static_cast<Index>(interior_vertices_.size()); }
  Index num_boundary() const { return num_vertices() - num_interior(); }

  const Matrix& vertices() const { return vertices_; }
  const Eigen::MatrixXi& elements() const { return elements_; }

  bool is_boundary(Index vertex) const { return interior_column_[vertex] < 0; }
  /// Interior column of a vertex, or -1 for boundary vertices.
  int interior_column(Index vertex) const { return interior_column_[vertex]; }
  const std::vector<int>& interior_columns() const { return interior_column_; }
  const std::vector<int>& interior_vertices() const { return interior_vertices_; }

  Vector centroid(Index element) const;
  /// dim x k matrix of element centroids.
  Matrix centroids() const;
  double bounding_box_diagonal() const;

 private:
  int dim_;
  Matrix vertices_;
  Eigen::MatrixXi elements_;
  std::vector<int> interior_column_;
  std::vector<int> interior_vertices_;
};

/// Sparse matrix of P1 shape-function gradients.
///
/// Row block l (rows l*dim .. l*dim+dim-1) holds the gradients of the
/// dim+1 shape functions of element l; column i of row l*dim+r is the r-th
/// component of grad(phi_i). `full` spans all vertices, `interior` drops
/// boundary columns (homogeneous Dirichlet).
struct GradientOperator {
  int dim = 0;
  RowSparseMatrix full;
  RowSparseMatrix interior;
  Vector volumes;
  std::vector<int> interior_column;

  Index num_elements() const { return volumes.size(); }
  Index num_rows() const { return full.rows(); }
  Index num_interior() const { return interior.cols(); }
};

Mesh parse_mesh(std::istream& in);
Mesh load_mesh(const std::filesystem::path& path);
void write_mesh(std::ostream& out, const Mesh& mesh);
void save_mesh(const Mesh& mesh, const std::filesystem::path& path);

/// |det(edge matrix)| / dim! for every element.
Vector element_volumes(const Mesh& mesh);

/// dim x (dim+1) matrix whose column a is grad(phi_a) for the a-th vertex of
/// the element, in the element's local vertex order.
Matrix element_gradients(const Mesh& mesh, Index element);

GradientOperator gradient_operator(const Mesh& mesh);

}  // namespace sketchfem
