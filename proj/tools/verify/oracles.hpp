#pragma once

// Dense reference computations written from the definitions, sharing no code
// with the library beyond the Mesh container. Used by `sketchfem verify`, the
// unit tests and the acceptance suite.

#include <sketchfem/mesh.hpp>
#include <sketchfem/types.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace sketchfem::oracle {

/// d x (d+1) vertex coordinates of one element.
Matrix element_vertices(const Mesh& mesh, Index element);

/// |det [1 x_a^T]_a| / d!.
double simplex_volume(const Matrix& vertices);

/// Gradients of the linear interpolants, column a for vertex a, from the
/// inverse of the (d+1) x (d+1) interpolation matrix [1 x_a^T].
Matrix interpolation_gradients(const Matrix& vertices);

/// Boundary flags from an O(k^2) scan: a facet is a boundary facet when no
/// other element contains all of its vertices.
std::vector<bool> brute_force_boundary(const Mesh& mesh);

/// Interior column of each vertex (-1 for boundary), ascending vertex id.
std::vector<int> interior_numbering(const std::vector<bool>& boundary);

/// Dense kd x n gradient operator over interior columns.
Matrix dense_gradient_operator(const Mesh& mesh);

/// sum_l z_l Y_l^T Y_l over interior columns, Y_l the element gradients.
Matrix element_loop_stiffness(const Mesh& mesh, const Vector& p);

/// b_i = sum_{l containing i} f_l |Omega_l| / (d+1) over interior vertices.
Vector element_loop_load(const Mesh& mesh, const Vector& f);

/// diag(X (X^T X)^{-1} X^T) with an explicit inverse.
Vector gram_inverse_leverage(const Matrix& x);

/// (1/c) sum_j X_(i_j)^T X_(i_j) / q_(i_j) over the raw draws.
Matrix naive_sketch(const Matrix& x, std::span<const RowIndex> draws, const Vector& q);

/// X^T R W W R^T X with explicit dense selector R (m x c) and weights
/// W_jj = 1 / sqrt(c q_(i_j)).
Matrix selector_sketch(const Matrix& x, std::span<const RowIndex> draws, const Vector& q);

/// ||(G-hat^{-1} G - I)||_2 from the eigenvalues of E^T E.
double spectral_deviation(const Matrix& g, const Matrix& g_hat);

/// ceil(15 rho ln(15 rho) / (beta eps^2)) in long double.
std::uint64_t planned_sample_size(long rho, long double epsilon, long double beta);

/// Lumped-mass nodal L2 norm over all vertices: sum_i m_i v_i^2 with
/// m_i = sum_{l containing i} |Omega_l| / (d+1).
double lumped_l2_norm(const Mesh& mesh, const Vector& vertex_values);

/// Chi-square upper quantile at probability 0.999 for `dof` degrees of
/// freedom (Wilson-Hilferty).
double chi_square_999(int dof);

}  // namespace sketchfem::oracle
