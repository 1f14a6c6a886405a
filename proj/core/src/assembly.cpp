#include <sketchfem/assembly.hpp>

#include <sketchfem/error.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace sketchfem {

ParameterField scaling_vector(const Vector& volumes, const Vector& p) {
  if (p.size() != volumes.size()) {
    throw ValidationError("parameter vector has length " + std::to_string(p.size()) + ", mesh has " +
                          std::to_string(volumes.size()) + " elements");
  }
  for (Index l = 0; l < p.size(); ++l) {
    if (!(p[l] > 0.0) || !std::isfinite(p[l])) {
      throw ValidationError("inadmissible coefficient p[" + std::to_string(l) +
                            "] = " + std::to_string(p[l]) + " (must be positive and finite)");
    }
  }
  return ParameterField{p, volumes.cwiseProduct(p)};
}

ParameterField scaling_vector(const Mesh& mesh, const Vector& p) {
  return scaling_vector(element_volumes(mesh), p);
}

Vector expand_weights(const Vector& z, int dim) {
  Vector w(z.size() * dim);
  for (Index l = 0; l < z.size(); ++l) w.segment(l * dim, dim).setConstant(z[l]);
  return w;
}

SparseMatrix assemble_stiffness(const GradientOperator& op, const ParameterField& field) {
  const int d = op.dim;
  const Index k = op.num_elements();
  if (field.z.size() != k) {
    throw ValidationError("scaling vector has length " + std::to_string(field.z.size()) +
                          ", operator has " + std::to_string(k) + " elements");
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(k * (d + 1) * (d + 1)));
  std::vector<int> columns(static_cast<std::size_t>(d + 1));
  Matrix grads(d, d + 1);
  for (Index l = 0; l < k; ++l) {
    // Every row of the block shares the element's d+1 (sorted) vertex columns.
    for (int r = 0; r < d; ++r) {
      int a = 0;
      for (RowSparseMatrix::InnerIterator it(op.full, l * d + r); it; ++it, ++a) {
        columns[static_cast<std::size_t>(a)] = static_cast<int>(it.col());
        grads(r, a) = it.value();
      }
    }
    const double z = field.z[l];
    for (int a = 0; a <= d; ++a) {
      const int ia = op.interior_column[static_cast<std::size_t>(columns[static_cast<std::size_t>(a)])];
      if (ia < 0) continue;
      for (int b = a; b <= d; ++b) {
        const int ib = op.interior_column[static_cast<std::size_t>(columns[static_cast<std::size_t>(b)])];
        if (ib < 0) continue;
        const double value = z * grads.col(a).dot(grads.col(b));
        triplets.emplace_back(ia, ib, value);
        if (ia != ib) triplets.emplace_back(ib, ia, value);
      }
    }
  }
  SparseMatrix a(op.num_interior(), op.num_interior());
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

Vector assemble_vertex_load(const Mesh& mesh, const Vector& f) {
  if (f.size() != mesh.num_elements()) {
    throw ValidationError("forcing vector has length " + std::to_string(f.size()) + ", mesh has " +
                          std::to_string(mesh.num_elements()) + " elements");
  }
  if (!f.allFinite()) throw ValidationError("forcing values must be finite");
  const Vector volumes = element_volumes(mesh);
  const int d = mesh.dim();
  Vector load = Vector::Zero(mesh.num_vertices());
  for (Index l = 0; l < mesh.num_elements(); ++l) {
    const double share = f[l] * volumes[l] / (d + 1);
    for (int a = 0; a <= d; ++a) load[mesh.elements()(a, l)] += share;
  }
  return load;
}

LoadVector assemble_load(const Mesh& mesh, const Vector& f) {
  const Vector all = assemble_vertex_load(mesh, f);
  LoadVector load{Vector(mesh.num_interior()), f};
  for (Index i = 0; i < mesh.num_interior(); ++i) {
    load.b[i] = all[mesh.interior_vertices()[static_cast<std::size_t>(i)]];
  }
  return load;
}

Vector reduced_load(const Matrix& basis, const Vector& b) {
  if (basis.rows() != b.size()) {
    throw ValidationError("basis has " + std::to_string(basis.rows()) +
                          " rows but load vector has length " + std::to_string(b.size()));
  }
  return basis.transpose() * b;
}

}  // namespace sketchfem
