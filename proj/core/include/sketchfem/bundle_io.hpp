#pragma once

#include <sketchfem/mesh.hpp>
#include <sketchfem/reduction.hpp>
#include <sketchfem/types.hpp>

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace sketchfem {

/// Container layout, all little-endian:
///   "SKFEM01\0" | u64 n | u64 rho | u64 kd |
///   f64 basis[n*rho] (column-major) | f64 eigenvalues[rho] |
///   f64 leverage[kd] | f64 q[kd] | f64 reduced_load[rho] | u8 fingerprint[32]
inline constexpr char kBundleMagic[8] = {'S', 'K', 'F', 'E', 'M', '0', '1', '\0'};

std::vector<std::uint8_t> serialize_bundle(const OfflineBundle& bundle);

/// Validates magic, sizes and the bundle invariants; throws FormatError.
OfflineBundle deserialize_bundle(std::span<const std::uint8_t> bytes);

void save_bundle(const OfflineBundle& bundle, const std::filesystem::path& path);
OfflineBundle load_bundle(const std::filesystem::path& path);

/// SHA-256 of the mesh geometry and connectivity (dimension, counts,
/// little-endian coordinates and indices). Independent of file formatting.
Fingerprint mesh_fingerprint(const Mesh& mesh);

std::string to_hex(const Fingerprint& fingerprint);

}  // namespace sketchfem
