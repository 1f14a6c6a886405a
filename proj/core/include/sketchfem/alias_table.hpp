#pragma once

#include <sketchfem/rng.hpp>
#include <sketchfem/types.hpp>

#include <vector>

namespace sketchfem {

/// Walker/Vose alias table: O(m) construction, O(1) draws.
///
/// Cells with zero probability are never returned.
class AliasTable {
 public:
  explicit AliasTable(const Vector& probabilities);

  RowIndex draw(Rng& rng) const {
    const double u = rng.uniform() * static_cast<double>(threshold_.size());
    auto cell = static_cast<std::size_t>(u);
    if (cell >= threshold_.size()) cell = threshold_.size() - 1;
    return (u - static_cast<double>(cell)) < threshold_[cell] ? static_cast<RowIndex>(cell) : alias_[cell];
  }

  Index size() const { return static_cast<Index>(threshold_.size()); }

  /// Probability mass the table assigns to `cell`.
  double probability(Index cell) const;

 private:
  std::vector<double> threshold_;
  std::vector<RowIndex> alias_;
};

}  // namespace sketchfem
