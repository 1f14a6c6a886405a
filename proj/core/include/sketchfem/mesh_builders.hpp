#pragma once

#include <sketchfem/mesh.hpp>

#include <cstdint>

/// Structured meshes for tests, the `verify` self-check and desk-scale runs.
namespace sketchfem::meshes {

/// Square [lo, hi]^2 split into cells x cells squares, each cut along the
/// (i,j)-(i+1,j+1) diagonal. `jitter` moves interior vertices uniformly by
/// up to jitter * h in each coordinate (jitter < 0.5 keeps elements valid).
Mesh square(int cells, double lo = 0.0, double hi = 1.0, double jitter = 0.0,
            std::uint64_t seed = 0);

/// Disk of the given radius centred at the origin, built from `rings`
/// concentric rings with 6i vertices on ring i (6 rings^2 triangles).
Mesh disk(int rings, double radius = 1.0);

/// Cube [lo, hi]^3 with cells^3 sub-cubes, each cut into 6 tetrahedra
/// around its main diagonal.
Mesh cube(int cells, double lo = -1.0, double hi = 1.0);

}  // namespace sketchfem::meshes
