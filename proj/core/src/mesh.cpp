#include <sketchfem/mesh.hpp>

#include <sketchfem/error.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace sketchfem {

namespace {

double factorial(int d) { return d == 2 ? 2.0 : 6.0; }

// Edge vectors v_a - v_0 as columns.
Matrix edge_matrix(const Matrix& vertices, const Eigen::MatrixXi& elements, Index element, int dim) {
  Matrix edges(dim, dim);
  const auto v0 = vertices.col(elements(0, element));
  for (int a = 1; a <= dim; ++a) {
    edges.col(a - 1) = vertices.col(elements(a, element)) - v0;
  }
  return edges;
}

double degenerate_threshold(double diagonal, int dim) {
  return 1e-14 * std::pow(diagonal, dim);
}

}  // namespace

Mesh::Mesh(int dim, Matrix vertices, Eigen::MatrixXi elements)
    : dim_(dim), vertices_(std::move(vertices)), elements_(std::move(elements)) {
  if (dim_ != 2 && dim_ != 3) {
    throw ValidationError("mesh dimension must be 2 or 3, got " + std::to_string(dim_));
  }
  if (vertices_.rows() != dim_) {
    throw ValidationError("vertex matrix must have one row per coordinate");
  }
  if (elements_.rows() != dim_ + 1) {
    throw ValidationError("each element needs dim+1 vertex ids");
  }
  if (elements_.cols() == 0) {
    throw ValidationError("mesh has no elements");
  }
  if (!vertices_.allFinite()) {
    throw ValidationError("vertex coordinates must be finite");
  }

  const Index nv = vertices_.cols();
  const Index k = elements_.cols();
  std::vector<char> referenced(static_cast<std::size_t>(nv), 0);
  for (Index l = 0; l < k; ++l) {
    for (int a = 0; a <= dim_; ++a) {
      const int v = elements_(a, l);
      if (v < 0 || v >= nv) {
        throw ValidationError("element " + std::to_string(l) + " references vertex " +
                              std::to_string(v) + " outside [0, " + std::to_string(nv) + ")");
      }
      for (int b = 0; b < a; ++b) {
        if (elements_(b, l) == v) {
          throw ValidationError("element " + std::to_string(l) + " repeats vertex " +
                                std::to_string(v));
        }
      }
      referenced[static_cast<std::size_t>(v)] = 1;
    }
  }
  for (Index v = 0; v < nv; ++v) {
    if (!referenced[static_cast<std::size_t>(v)]) {
      throw ValidationError("vertex " + std::to_string(v) + " is not referenced by any element");
    }
  }

  const double threshold = degenerate_threshold(bounding_box_diagonal(), dim_);
  for (Index l = 0; l < k; ++l) {
    const double volume = std::abs(edge_matrix(vertices_, elements_, l, dim_).determinant()) /
                          factorial(dim_);
    if (!(volume >= threshold) || volume == 0.0) {
      throw ValidationError("element " + std::to_string(l) + " is degenerate (volume " +
                            std::to_string(volume) + ")");
    }
  }

  // Facet incidence. A facet is the sorted tuple of dim vertex ids; unused
  // trailing slot stays -1 in 2D.
  using Facet = std::array<int, 3>;
  std::vector<Facet> facets;
  facets.reserve(static_cast<std::size_t>(k * (dim_ + 1)));
  for (Index l = 0; l < k; ++l) {
    for (int skip = 0; skip <= dim_; ++skip) {
      Facet f{-1, -1, -1};
      int slot = 0;
      for (int a = 0; a <= dim_; ++a) {
        if (a != skip) f[slot++] = elements_(a, l);
      }
      std::sort(f.begin(), f.begin() + dim_);
      facets.push_back(f);
    }
  }
  std::sort(facets.begin(), facets.end());

  std::vector<char> boundary(static_cast<std::size_t>(nv), 0);
  for (std::size_t i = 0; i < facets.size();) {
    std::size_t j = i;
    while (j < facets.size() && facets[j] == facets[i]) ++j;
    const std::size_t count = j - i;
    if (count > 2) {
      throw ValidationError("non-manifold mesh: a facet is shared by " + std::to_string(count) +
                            " elements");
    }
    if (count == 1) {
      for (int a = 0; a < dim_; ++a) boundary[static_cast<std::size_t>(facets[i][a])] = 1;
    }
    i = j;
  }

  interior_column_.assign(static_cast<std::size_t>(nv), -1);
  for (Index v = 0; v < nv; ++v) {
    if (!boundary[static_cast<std::size_t>(v)]) {
      interior_column_[static_cast<std::size_t>(v)] = static_cast<int>(interior_vertices_.size());
      interior_vertices_.push_back(static_cast<int>(v));
    }
  }
}

Vector Mesh::centroid(Index element) const {
  Vector c = Vector::Zero(dim_);
  for (int a = 0; a <= dim_; ++a) c += vertices_.col(elements_(a, element));
  return c / static_cast<double>(dim_ + 1);
}

Matrix Mesh::centroids() const {
  Matrix c(dim_, num_elements());
  for (Index l = 0; l < num_elements(); ++l) c.col(l) = centroid(l);
  return c;
}

double Mesh::bounding_box_diagonal() const {
  return (vertices_.rowwise().maxCoeff() - vertices_.rowwise().minCoeff()).norm();
}

Mesh parse_mesh(std::istream& in) {
  // Strip comment lines, then read whitespace-separated tokens.
  std::stringstream body;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first != std::string::npos && line[first] == '#') continue;
    body << line << '\n';
  }

  long long dim = 0, nv = 0, k = 0;
  if (!(body >> dim >> nv >> k)) {
    throw ParseError("mesh header must be 'd nv k'");
  }
  if (dim != 2 && dim != 3) throw ParseError("mesh dimension must be 2 or 3");
  if (nv <= 0 || k <= 0) throw ParseError("mesh needs a positive vertex and element count");

  Matrix vertices(dim, nv);
  for (long long v = 0; v < nv; ++v) {
    for (long long r = 0; r < dim; ++r) {
      if (!(body >> vertices(r, v))) {
        throw ParseError("truncated or malformed coordinates at vertex " + std::to_string(v));
      }
    }
  }
  Eigen::MatrixXi elements(dim + 1, k);
  for (long long l = 0; l < k; ++l) {
    for (long long a = 0; a <= dim; ++a) {
      long long id = 0;
      if (!(body >> id)) {
        throw ParseError("truncated or malformed connectivity at element " + std::to_string(l));
      }
      if (id < 0 || id >= nv) {
        throw ValidationError("element " + std::to_string(l) + " references vertex " +
                              std::to_string(id) + " outside [0, " + std::to_string(nv) + ")");
      }
      elements(a, l) = static_cast<int>(id);
    }
  }
  std::string extra;
  if (body >> extra) throw ParseError("unexpected trailing token '" + extra + "'");

  return Mesh(static_cast<int>(dim), std::move(vertices), std::move(elements));
}

Mesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file " + path.string());
  return parse_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << mesh.dim() << ' ' << mesh.num_vertices() << ' ' << mesh.num_elements() << '\n';
  out << std::setprecision(17);
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    for (int r = 0; r < mesh.dim(); ++r) out << (r ? " " : "") << mesh.vertices()(r, v);
    out << '\n';
  }
  for (Index l = 0; l < mesh.num_elements(); ++l) {
    for (int a = 0; a <= mesh.dim(); ++a) out << (a ? " " : "") << mesh.elements()(a, l);
    out << '\n';
  }
}

void save_mesh(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write mesh file " + path.string());
  write_mesh(out, mesh);
}

Vector element_volumes(const Mesh& mesh) {
  Vector volumes(mesh.num_elements());
  for (Index l = 0; l < mesh.num_elements(); ++l) {
    volumes[l] = std::abs(edge_matrix(mesh.vertices(), mesh.elements(), l, mesh.dim()).determinant()) /
                 factorial(mesh.dim());
  }
  return volumes;
}

Matrix element_gradients(const Mesh& mesh, Index element) {
  const int d = mesh.dim();
  const Matrix edges = edge_matrix(mesh.vertices(), mesh.elements(), element, d);
  const Eigen::PartialPivLU<Matrix> lu(edges);
  if (std::abs(lu.determinant()) / factorial(d) <
      degenerate_threshold(mesh.bounding_box_diagonal(), d)) {
    throw ValidationError("element " + std::to_string(element) + " is degenerate");
  }
  // phi_a(x) = (E^{-1}(x - v0))_a for a >= 1, so grad(phi_a) is row a-1 of E^{-1}.
  const Matrix inverse = lu.inverse();
  Matrix grads(d, d + 1);
  for (int a = 1; a <= d; ++a) grads.col(a) = inverse.row(a - 1).transpose();
  grads.col(0) = -grads.rightCols(d).rowwise().sum();
  return grads;
}

GradientOperator gradient_operator(const Mesh& mesh) {
  const int d = mesh.dim();
  const Index k = mesh.num_elements();
  const double diagonal = mesh.bounding_box_diagonal();
  const double threshold = degenerate_threshold(diagonal, d);

  GradientOperator op;
  op.dim = d;
  op.volumes.resize(k);
  op.interior_column = mesh.interior_columns();

  std::vector<Eigen::Triplet<double>> full, interior;
  full.reserve(static_cast<std::size_t>(k * d * (d + 1)));
  interior.reserve(static_cast<std::size_t>(k * d * (d + 1)));
  for (Index l = 0; l < k; ++l) {
    const Matrix edges = edge_matrix(mesh.vertices(), mesh.elements(), l, d);
    const Eigen::PartialPivLU<Matrix> lu(edges);
    const double volume = std::abs(lu.determinant()) / factorial(d);
    if (volume < threshold) {
      throw ValidationError("element " + std::to_string(l) + " is degenerate");
    }
    op.volumes[l] = volume;
    const Matrix inverse = lu.inverse();
    Matrix grads(d, d + 1);
    for (int a = 1; a <= d; ++a) grads.col(a) = inverse.row(a - 1).transpose();
    grads.col(0) = -grads.rightCols(d).rowwise().sum();

    for (int a = 0; a <= d; ++a) {
      const int vertex = mesh.elements()(a, l);
      const int column = mesh.interior_column(vertex);
      for (int r = 0; r < d; ++r) {
        const auto row = static_cast<int>(l * d + r);
        full.emplace_back(row, vertex, grads(r, a));
        if (column >= 0) interior.emplace_back(row, column, grads(r, a));
      }
    }
  }
  op.full.resize(k * d, mesh.num_vertices());
  op.full.setFromTriplets(full.begin(), full.end());
  op.interior.resize(k * d, mesh.num_interior());
  op.interior.setFromTriplets(interior.begin(), interior.end());
  return op;
}

}  // namespace sketchfem
