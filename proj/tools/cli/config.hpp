#pragma once

#include <sketchfem/fields.hpp>
#include <sketchfem/types.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace sketchfem::cli {

/// Run configuration for `sketchfem online`. Flat `key = value` text, one
/// entry per line, `#` starts a comment. Relative paths resolve against the
/// directory of the configuration file.
///
///   mesh, bundle, output          paths
///   forcing                       ball | one (must match the bundle)
///   queries                       N >= 1
///   rho                           optional, must equal the bundle's rank
///   c                             sample size, or
///   epsilon [, beta]              c = plan_sample_size(rho, epsilon, beta)
///   seed, threads
///   field                         uniform | lognormal_matern | discontinuous
///   field.lo, field.hi            uniform
///   field.nu, field.m_diag, field.variance, field.kl_modes   lognormal_matern
///   field.offset, field.sign_weights, field.noise            discontinuous
struct RunConfig {
  std::filesystem::path mesh_path;
  std::filesystem::path bundle_path;
  std::filesystem::path output_csv_path;
  std::string forcing = "ball";
  std::uint64_t queries = 100;
  std::optional<Index> rho;
  std::optional<std::uint64_t> c;
  std::optional<double> epsilon;
  double beta = 0.5;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  FieldSpec field;

  /// c as given, or planned from epsilon and beta at rank `rank`.
  std::uint64_t sample_size(Index rank) const;
};

/// Parses and validates; `base` resolves relative paths. Throws ParseError
/// for malformed lines and ValidationError for bad values.
RunConfig parse_config(std::istream& in, const std::filesystem::path& base = {});

/// Also checks that the mesh and bundle files exist.
RunConfig load_config(const std::filesystem::path& path);

}  // namespace sketchfem::cli
