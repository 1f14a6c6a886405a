#pragma once

#include <sketchfem/types.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

namespace sketchfem::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// Builds and saves the offline bundle for a mesh file.
int cmd_offline(const std::filesystem::path& mesh_path, Index rho, const std::string& forcing,
                const std::filesystem::path& bundle_path, std::ostream& out);

/// Runs the benchmark stream of a configuration file and writes its CSV.
/// `threads` overrides the configured worker count when nonzero.
int cmd_online(const std::filesystem::path& config_path, unsigned threads, std::ostream& out);

/// Runs the oracle checks; kExitNumerical if any fails.
int cmd_verify(std::ostream& out, const std::string& filter = {});

struct MeshSpec {
  std::string shape = "disk";  // square | disk | cube
  int cells = 10;
  double jitter = 0.0;
  std::uint64_t seed = 0;
};

/// Writes a built-in mesh.
int cmd_mesh(const MeshSpec& spec, const std::filesystem::path& out_path, std::ostream& out);

/// Runs `body`, mapping library exceptions to exit codes with a message on
/// `err`.
int run_guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace sketchfem::cli
