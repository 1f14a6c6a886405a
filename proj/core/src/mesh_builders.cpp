#include <sketchfem/mesh_builders.hpp>

#include <sketchfem/error.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace sketchfem::meshes {

Mesh square(int cells, double lo, double hi, double jitter, std::uint64_t seed) {
  if (cells < 1 || !(hi > lo)) throw ValidationError("square mesh needs cells >= 1 and hi > lo");
  if (jitter < 0.0 || jitter >= 0.5) throw ValidationError("jitter must lie in [0, 0.5)");
  const int side = cells + 1;
  const double h = (hi - lo) / cells;
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> shift(-jitter * h, jitter * h);

  Matrix vertices(2, side * side);
  for (int j = 0; j < side; ++j) {
    for (int i = 0; i < side; ++i) {
      double x = lo + i * h;
      double y = lo + j * h;
      const bool interior = i > 0 && i < cells && j > 0 && j < cells;
      if (interior && jitter > 0.0) {
        x += shift(engine);
        y += shift(engine);
      }
      vertices(0, j * side + i) = x;
      vertices(1, j * side + i) = y;
    }
  }
  Eigen::MatrixXi elements(3, 2 * cells * cells);
  int l = 0;
  for (int j = 0; j < cells; ++j) {
    for (int i = 0; i < cells; ++i) {
      const int v00 = j * side + i;
      const int v10 = v00 + 1;
      const int v01 = v00 + side;
      const int v11 = v01 + 1;
      elements.col(l++) << v00, v10, v11;
      elements.col(l++) << v00, v11, v01;
    }
  }
  return Mesh(2, std::move(vertices), std::move(elements));
}

Mesh disk(int rings, double radius) {
  if (rings < 1 || !(radius > 0.0)) throw ValidationError("disk mesh needs rings >= 1 and radius > 0");
  const auto ring_start = [](int i) { return i == 0 ? 0 : 1 + 3 * i * (i - 1); };
  const int nv = 1 + 3 * rings * (rings + 1);

  Matrix vertices(2, nv);
  vertices.col(0).setZero();
  for (int i = 1; i <= rings; ++i) {
    const double r = radius * i / rings;
    for (int j = 0; j < 6 * i; ++j) {
      const double angle = 2.0 * std::numbers::pi * j / (6 * i);
      vertices(0, ring_start(i) + j) = r * std::cos(angle);
      vertices(1, ring_start(i) + j) = r * std::sin(angle);
    }
  }

  Eigen::MatrixXi elements(3, 6 * rings * rings);
  int l = 0;
  for (int i = 1; i <= rings; ++i) {
    const auto inner = [&](int t) {
      return i == 1 ? 0 : ring_start(i - 1) + t % (6 * (i - 1));
    };
    const auto outer = [&](int t) { return ring_start(i) + t % (6 * i); };
    for (int s = 0; s < 6; ++s) {
      // Zip the inner sector (i vertices incl. end) with the outer (i+1).
      for (int t = 0; t < i; ++t) {
        elements.col(l++) << outer(s * i + t), outer(s * i + t + 1), inner(s * (i - 1) + t);
      }
      for (int t = 0; t + 1 < i; ++t) {
        elements.col(l++) << inner(s * (i - 1) + t), outer(s * i + t + 1), inner(s * (i - 1) + t + 1);
      }
    }
  }
  return Mesh(2, std::move(vertices), std::move(elements));
}

Mesh cube(int cells, double lo, double hi) {
  if (cells < 1 || !(hi > lo)) throw ValidationError("cube mesh needs cells >= 1 and hi > lo");
  const int side = cells + 1;
  const double h = (hi - lo) / cells;
  const auto id = [side](int i, int j, int k) { return (k * side + j) * side + i; };

  Matrix vertices(3, side * side * side);
  for (int k = 0; k < side; ++k) {
    for (int j = 0; j < side; ++j) {
      for (int i = 0; i < side; ++i) {
        vertices.col(id(i, j, k)) << lo + i * h, lo + j * h, lo + k * h;
      }
    }
  }

  // Kuhn subdivision: one tetrahedron per axis permutation, walking from
  // corner (0,0,0) to (1,1,1) one axis at a time.
  static constexpr std::array<std::array<int, 3>, 6> kPermutations{{
      {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  Eigen::MatrixXi elements(4, 6 * cells * cells * cells);
  int l = 0;
  for (int k = 0; k < cells; ++k) {
    for (int j = 0; j < cells; ++j) {
      for (int i = 0; i < cells; ++i) {
        for (const auto& perm : kPermutations) {
          std::array<int, 3> corner{i, j, k};
          elements(0, l) = id(corner[0], corner[1], corner[2]);
          for (int step = 0; step < 3; ++step) {
            ++corner[static_cast<std::size_t>(perm[static_cast<std::size_t>(step)])];
            elements(step + 1, l) = id(corner[0], corner[1], corner[2]);
          }
          ++l;
        }
      }
    }
  }
  return Mesh(3, std::move(vertices), std::move(elements));
}

}  // namespace sketchfem::meshes
