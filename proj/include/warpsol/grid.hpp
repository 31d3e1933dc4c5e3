#pragma once

#include <cstddef>
#include <vector>

#include "warpsol/errors.hpp"
#include "warpsol/hypersurface.hpp"

namespace warpsol {

using ChartPoint = std::vector<double>;

/// Tensor-product lattice over the chart box, shrunk by `margins` on each side.
/// The first chart variable varies slowest.
inline std::vector<ChartPoint> make_grid(const ChartBox& box, const std::vector<std::size_t>& samples,
                                         const std::vector<double>& margins) {
  const std::size_t n = box.dim();
  if (samples.size() != n || margins.size() != n) throw DomainError("grid specification does not match the chart");
  std::vector<std::vector<double>> axes(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (samples[i] < 1) throw DomainError("grid needs at least one sample per axis");
    const double lo = box.lo[i] + margins[i], hi = box.hi[i] - margins[i];
    if (!(lo <= hi)) throw DomainError("grid margins exceed the chart box for " + box.names[i]);
    for (std::size_t k = 0; k < samples[i]; ++k)
      axes[i].push_back(samples[i] == 1 ? 0.5 * (lo + hi)
                                        : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(samples[i] - 1));
  }
  std::vector<ChartPoint> points;
  ChartPoint current(n);
  auto recurse = [&](auto&& self, std::size_t axis) -> void {
    if (axis == n) {
      points.push_back(current);
      return;
    }
    for (double v : axes[axis]) {
      current[axis] = v;
      self(self, axis + 1);
    }
  };
  recurse(recurse, 0);
  return points;
}

/// Same number of samples and margin on every axis.
inline std::vector<ChartPoint> make_grid(const ChartBox& box, std::size_t samples, double margin) {
  return make_grid(box, std::vector<std::size_t>(box.dim(), samples), std::vector<double>(box.dim(), margin));
}

}  // namespace warpsol
