#pragma once

#include <sketchfem/mesh.hpp>
#include <sketchfem/types.hpp>

namespace sketchfem {

/// Element-average coefficients p and the scaling z = |Omega_l| p_l.
struct ParameterField {
  Vector p;
  Vector z;
};

/// Element-average forcing values and the resulting interior load vector.
struct LoadVector {
  Vector b;
  Vector f;
};

ParameterField scaling_vector(const Vector& volumes, const Vector& p);
ParameterField scaling_vector(const Mesh& mesh, const Vector& p);

/// z (x) 1_d: the diagonal of Z^2, one entry per row of the gradient operator.
Vector expand_weights(const Vector& z, int dim);

/// A = D^T diag(z (x) 1_d) D over interior columns, assembled element by
/// element so that A(i,j) and A(j,i) are summed in the same order.
SparseMatrix assemble_stiffness(const GradientOperator& op, const ParameterField& field);

/// Load contribution f_l |Omega_l| / (d+1) for every vertex, boundary included.
Vector assemble_vertex_load(const Mesh& mesh, const Vector& f);

/// Interior-restricted load vector.
LoadVector assemble_load(const Mesh& mesh, const Vector& f);

/// Psi^T b.
Vector reduced_load(const Matrix& basis, const Vector& b);

}  // namespace sketchfem
