#include <sketchfem/fields.hpp>

#include <sketchfem/error.hpp>
#include <sketchfem/rng.hpp>

#include <cmath>
#include <numbers>
#include <random>

namespace sketchfem {

namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void check_matern_parameters(double nu, const std::vector<double>& m_diag, double variance, int dim) {
  const double twice = 2.0 * nu;
  if (!(nu > 0.0) || std::abs(twice - std::round(twice)) > 1e-12 ||
      static_cast<long long>(std::round(twice)) % 2 != 1) {
    throw ValidationError("Matern smoothness must be a positive half-integer, got " + std::to_string(nu));
  }
  if (static_cast<int>(m_diag.size()) < dim) {
    throw ValidationError("Matern metric needs " + std::to_string(dim) + " diagonal entries");
  }
  for (int i = 0; i < dim; ++i) {
    if (!(m_diag[static_cast<std::size_t>(i)] > 0.0)) throw ValidationError("Matern metric must be positive");
  }
  if (!(variance >= 0.0) || !std::isfinite(variance)) throw ValidationError("variance must be nonnegative");
}

// r^nu K_nu(r) for nu = n + 1/2, via k_{mu+1} = r^2 k_{mu-1} + 2 mu k_mu
// (the scaled form of K_{mu+1} = K_{mu-1} + (2 mu / r) K_mu) started from
// K_{+-1/2}(r) = sqrt(pi / 2r) e^{-r}. Finite at r = 0.
double scaled_bessel_k(double nu, double r) {
  const double base = std::sqrt(std::numbers::pi / 2.0) * std::exp(-r);
  double lower_times_r2 = base * r;  // r^2 * (r^{-1/2} K_{-1/2})
  double current = base;             // r^{1/2} K_{1/2}
  for (double mu = 0.5; mu < nu - 0.25; mu += 1.0) {
    const double next = lower_times_r2 + 2.0 * mu * current;
    lower_times_r2 = r * r * current;
    current = next;
  }
  return current;
}

double matern_from_distance(double r, double nu, double variance) {
  if (r == 0.0) return variance;
  return variance * std::pow(2.0, 1.0 - nu) / std::tgamma(nu) * scaled_bessel_k(nu, r);
}

double metric_distance(const Vector& x, const Vector& y, const std::vector<double>& m_diag) {
  double r2 = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    const double delta = x[i] - y[i];
    r2 += delta * delta / m_diag[static_cast<std::size_t>(i)];
  }
  return std::sqrt(r2);
}

}  // namespace

std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::uniform: return "uniform";
    case FieldKind::lognormal_matern: return "lognormal_matern";
    case FieldKind::discontinuous: return "discontinuous";
  }
  return "unknown";
}

FieldKind parse_field_kind(std::string_view name) {
  if (name == "uniform") return FieldKind::uniform;
  if (name == "lognormal_matern" || name == "lognormal") return FieldKind::lognormal_matern;
  if (name == "discontinuous") return FieldKind::discontinuous;
  throw ValidationError("unknown field kind '" + std::string(name) + "'");
}

Vector uniform_field(Index k, double lo, double hi, std::uint64_t seed) {
  if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) {
    throw ValidationError("uniform field needs 0 < lo <= hi < inf");
  }
  Rng rng(seed);
  Vector p(k);
  for (Index l = 0; l < k; ++l) p[l] = lo + (hi - lo) * rng.uniform();
  return p;
}

double matern_covariance(const Vector& x, const Vector& y, double nu, const std::vector<double>& m_diag,
                         double variance) {
  if (x.size() != y.size()) throw ValidationError("covariance points differ in dimension");
  check_matern_parameters(nu, m_diag, variance, static_cast<int>(x.size()));
  const double r = metric_distance(x, y, m_diag);
  if (!std::isfinite(r)) throw ValidationError("covariance distance is not finite");
  return matern_from_distance(r, nu, variance);
}

LognormalField::LognormalField(const Mesh& mesh, double nu, const std::vector<double>& m_diag,
                               double variance, Index kl_modes)
    : k_(mesh.num_elements()) {
  check_matern_parameters(nu, m_diag, variance, mesh.dim());
  if (kl_modes < 0 || kl_modes > k_) {
    throw ValidationError("kl_modes must lie in [0, " + std::to_string(k_) + "]");
  }
  if (variance == 0.0) {
    modes_.resize(k_, 0);
    return;
  }
  if (k_ > kMaxKarhunenLoeveElements) {
    throw ValidationError("dense Karhunen-Loeve expansion is limited to " +
                          std::to_string(kMaxKarhunenLoeveElements) + " elements, mesh has " +
                          std::to_string(k_));
  }

  const Matrix centroids = mesh.centroids();
  Matrix covariance(k_, k_);
  for (Index j = 0; j < k_; ++j) {
    for (Index i = j; i < k_; ++i) {
      const double value =
          matern_from_distance(metric_distance(centroids.col(i), centroids.col(j), m_diag), nu, variance);
      covariance(i, j) = value;
      covariance(j, i) = value;
    }
  }
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(covariance);
  if (eig.info() != Eigen::Success) throw NumericalError("covariance eigendecomposition failed");

  // Descending, negative round-off clamped to zero.
  const Vector values = eig.eigenvalues().reverse().cwiseMax(0.0);
  Index modes = kl_modes;
  if (modes == 0) {
    const double total = values.sum();
    double running = 0.0;
    while (modes < k_ && running < 0.999 * total) running += values[modes++];
  }
  eigenvalues_ = values.head(modes);
  modes_.resize(k_, modes);
  for (Index j = 0; j < modes; ++j) {
    modes_.col(j) = eig.eigenvectors().col(k_ - 1 - j) * std::sqrt(values[j]);
  }
}

Vector LognormalField::sample(std::uint64_t seed) const {
  Rng rng(seed);
  std::normal_distribution<double> normal;
  Vector xi(modes_.cols());
  for (Index j = 0; j < xi.size(); ++j) xi[j] = normal(rng);
  Vector log_field = Vector::Zero(k_);
  if (xi.size() > 0) log_field = modes_ * xi;
  return log_field.array().exp().matrix();
}

Vector lognormal_field(const Mesh& mesh, double nu, const std::vector<double>& m_diag, double variance,
                       Index kl_modes, std::uint64_t seed) {
  return LognormalField(mesh, nu, m_diag, variance, kl_modes).sample(seed);
}

Vector discontinuous_field(const Mesh& mesh, std::uint64_t seed, double offset,
                           const std::array<double, 3>& sign_weights, double noise) {
  if (!(noise >= 0.0)) throw ValidationError("noise amplitude must be nonnegative");
  double minimum = offset;
  for (int i = 0; i < mesh.dim(); ++i) minimum -= std::abs(sign_weights[static_cast<std::size_t>(i)]);
  if (!(minimum > 0.0)) {
    throw ValidationError("discontinuous field parameters allow nonpositive coefficients");
  }
  Rng rng(seed);
  Vector p(mesh.num_elements());
  for (Index l = 0; l < mesh.num_elements(); ++l) {
    const Vector c = mesh.centroid(l);
    double value = offset;
    for (int i = 0; i < mesh.dim(); ++i) value += sign_weights[static_cast<std::size_t>(i)] * sign(c[i]);
    p[l] = value + noise * rng.uniform();
  }
  return p;
}

Vector ball_forcing(const Mesh& mesh, double value, double radius) {
  Vector center = Vector::Zero(mesh.dim());
  center[0] = -0.5;
  Vector f(mesh.num_elements());
  for (Index l = 0; l < mesh.num_elements(); ++l) {
    f[l] = (mesh.centroid(l) - center).norm() <= radius ? value : 0.0;
  }
  return f;
}

Vector constant_forcing(const Mesh& mesh, double value) {
  return Vector::Constant(mesh.num_elements(), value);
}

Vector forcing_by_name(const Mesh& mesh, std::string_view name) {
  if (name == "ball") return ball_forcing(mesh);
  if (name == "one") return constant_forcing(mesh);
  throw ValidationError("unknown forcing '" + std::string(name) + "' (expected ball or one)");
}

FieldGenerator::FieldGenerator(const Mesh& mesh, FieldSpec spec) : mesh_(&mesh), spec_(std::move(spec)) {
  switch (spec_.kind) {
    case FieldKind::uniform:
      if (!(spec_.lo > 0.0) || !(spec_.hi >= spec_.lo)) throw ValidationError("uniform field needs 0 < lo <= hi");
      break;
    case FieldKind::lognormal_matern:
      lognormal_.emplace_back(mesh, spec_.nu, spec_.m_diag, spec_.variance, spec_.kl_modes);
      break;
    case FieldKind::discontinuous:
      discontinuous_field(mesh, 0, spec_.offset, spec_.sign_weights, spec_.noise);
      break;
  }
}

Vector FieldGenerator::sample(std::uint64_t seed) const {
  switch (spec_.kind) {
    case FieldKind::uniform: return uniform_field(mesh_->num_elements(), spec_.lo, spec_.hi, seed);
    case FieldKind::lognormal_matern: return lognormal_.front().sample(seed);
    case FieldKind::discontinuous:
      return discontinuous_field(*mesh_, seed, spec_.offset, spec_.sign_weights, spec_.noise);
  }
  throw ValidationError("unknown field kind");
}

}  // namespace sketchfem
