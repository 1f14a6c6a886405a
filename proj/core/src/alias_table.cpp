#include <sketchfem/alias_table.hpp>

#include <sketchfem/error.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace sketchfem {

AliasTable::AliasTable(const Vector& probabilities) {
  const Index m = probabilities.size();
  if (m == 0) throw ValidationError("sampling distribution is empty");
  if (static_cast<std::uint64_t>(m) > std::numeric_limits<RowIndex>::max()) {
    throw ValidationError("sampling distribution has too many cells");
  }
  double total = 0.0;
  for (Index i = 0; i < m; ++i) {
    if (!(probabilities[i] >= 0.0) || !std::isfinite(probabilities[i])) {
      throw ValidationError("probability " + std::to_string(i) + " is negative or not finite");
    }
    total += probabilities[i];
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("probabilities sum to " + std::to_string(total) + ", expected 1");
  }

  threshold_.assign(static_cast<std::size_t>(m), 0.0);
  alias_.assign(static_cast<std::size_t>(m), 0);
  std::vector<double> scaled(static_cast<std::size_t>(m));
  std::vector<RowIndex> small, large, zero;
  RowIndex some_positive = 0;
  for (Index i = 0; i < m; ++i) {
    const auto cell = static_cast<std::size_t>(i);
    scaled[cell] = probabilities[i] * static_cast<double>(m) / total;
    if (probabilities[i] == 0.0) {
      zero.push_back(static_cast<RowIndex>(i));
    } else {
      some_positive = static_cast<RowIndex>(i);
      (scaled[cell] < 1.0 ? small : large).push_back(static_cast<RowIndex>(i));
    }
  }
  // Zero cells go on top of the stack so they are paired while large cells remain.
  small.insert(small.end(), zero.begin(), zero.end());

  while (!small.empty() && !large.empty()) {
    const RowIndex s = small.back();
    small.pop_back();
    const RowIndex l = large.back();
    threshold_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Rounding leftovers keep their own cell, except zero-probability cells.
  for (const auto* rest : {&small, &large}) {
    for (const RowIndex cell : *rest) {
      if (probabilities[cell] == 0.0) {
        threshold_[cell] = 0.0;
        alias_[cell] = some_positive;
      } else {
        threshold_[cell] = 1.0;
        alias_[cell] = cell;
      }
    }
  }
}

double AliasTable::probability(Index cell) const {
  const double m = static_cast<double>(threshold_.size());
  double mass = threshold_[static_cast<std::size_t>(cell)] / m;
  for (std::size_t i = 0; i < threshold_.size(); ++i) {
    if (alias_[i] == cell && static_cast<Index>(i) != cell) mass += (1.0 - threshold_[i]) / m;
  }
  return mass;
}

}  // namespace sketchfem
