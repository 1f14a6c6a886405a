#pragma once

#include <sketchfem/mesh.hpp>
#include <sketchfem/types.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sketchfem {

enum class FieldKind { uniform, lognormal_matern, discontinuous };

std::string_view to_string(FieldKind kind);
FieldKind parse_field_kind(std::string_view name);

/// Benchmark parameter field description. Only the parameters of `kind`
/// are used.
struct FieldSpec {
  FieldKind kind = FieldKind::uniform;

  // uniform
  double lo = 0.1;
  double hi = 100.0;

  // lognormal_matern: p = exp(b), b a centred Gaussian field with
  // Whittle-Matern covariance; ||x||_M^2 = sum_i x_i^2 / m_diag[i].
  double nu = 7.5;
  std::vector<double> m_diag{0.04, 0.04, 0.04};
  double variance = 1.0;
  Index kl_modes = 0;  // 0 selects the 99.9% energy truncation

  // discontinuous: offset + sum_i w_i sgn(x_i) + noise * U[0,1]
  double offset = 9.1;
  std::array<double, 3> sign_weights{1.0, 3.0, 5.0};
  double noise = 0.1;
};

/// iid U[lo, hi] per element.
Vector uniform_field(Index k, double lo, double hi, std::uint64_t seed);

/// Whittle-Matern covariance Var 2^{1-nu}/Gamma(nu) r^nu K_nu(r) for
/// half-integer nu, r = ||x - y||_M. Equals `variance` at x == y.
double matern_covariance(const Vector& x, const Vector& y, double nu, const std::vector<double>& m_diag,
                         double variance);

/// Largest number of elements for which the dense centroid covariance is
/// eigendecomposed.
inline constexpr Index kMaxKarhunenLoeveElements = 6000;

/// Truncated Karhunen-Loeve expansion of the centroid covariance, computed
/// once; each sample costs one k x modes product.
class LognormalField {
 public:
  LognormalField(const Mesh& mesh, double nu, const std::vector<double>& m_diag, double variance,
                 Index kl_modes = 0);

  Vector sample(std::uint64_t seed) const;
  Index modes() const { return modes_.cols(); }
  /// Retained KL eigenvalues, descending.
  const Vector& eigenvalues() const { return eigenvalues_; }

 private:
  Matrix modes_;  // k x m, columns sqrt(lambda_j) v_j
  Vector eigenvalues_;
  Index k_;
};

Vector lognormal_field(const Mesh& mesh, double nu, const std::vector<double>& m_diag, double variance,
                       Index kl_modes, std::uint64_t seed);

/// offset + w1 sgn(x1) + w2 sgn(x2) [+ w3 sgn(x3)] + noise U[0,1] at element
/// centroids, with sgn(0) = 0. In 2D the x3 term is dropped.
Vector discontinuous_field(const Mesh& mesh, std::uint64_t seed, double offset = 9.1,
                           const std::array<double, 3>& sign_weights = {1.0, 3.0, 5.0},
                           double noise = 0.1);

/// `value` on elements whose centroid lies within `radius` of (-1/2, 0[, 0]).
Vector ball_forcing(const Mesh& mesh, double value = 5.0, double radius = 0.3);

Vector constant_forcing(const Mesh& mesh, double value = 1.0);

/// "ball" or "one".
Vector forcing_by_name(const Mesh& mesh, std::string_view name);

/// Draws parameter fields for one spec on one mesh; the KL expansion for
/// lognormal fields is computed at construction.
class FieldGenerator {
 public:
  FieldGenerator(const Mesh& mesh, FieldSpec spec);

  Vector sample(std::uint64_t seed) const;
  const FieldSpec& spec() const { return spec_; }

 private:
  const Mesh* mesh_;
  FieldSpec spec_;
  std::vector<LognormalField> lognormal_;  // empty unless kind is lognormal_matern
};

}  // namespace sketchfem
