#include "coreloss/cwh.hpp"

#include <cmath>

namespace coreloss {

double default_min_delta_b(const TimeSeries& b) {
  const auto [lo, hi] = min_max(b);
  return 1e-4 * (hi - lo);
}

Segmentation segment(const TimeSeries& b) { return segment(b, default_min_delta_b(b)); }

Segmentation segment(const TimeSeries& b, double min_delta_b) {
  if (min_delta_b < 0.0 || !std::isfinite(min_delta_b))
    throw ValidationError("segment: min_delta_b must be >= 0");
  const auto& v = b.values();
  const std::size_t n = v.size();

  // Boundaries sit at the first interval of each new slope polarity; zero
  // intervals (plateaus) extend the pending boundary instead of opening one.
  std::vector<std::size_t> bounds;
  bounds.push_back(0);
  int last_sign = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = v[i + 1] - v[i];
    const int s = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (s == 0) continue;
    if (last_sign != 0 && s != last_sign) bounds.push_back(i);
    last_sign = s;
  }
  bounds.push_back(n - 1);

  if (last_sign == 0 || bounds.size() < 3)
    throw NumericError("segment: fewer than two turning points (degenerate excitation)");

  // Merge sub-threshold segments into the preceding neighbor by dropping the
  // shared boundary; the first segment merges forward. An absorbed segment
  // leaves its two neighbors running in the same direction, so boundaries
  // that no longer flip polarity are coalesced as well. Tiling is preserved.
  bool changed = true;
  while (changed && bounds.size() > 2) {
    changed = false;
    for (std::size_t k = 1; k < bounds.size(); ++k) {
      if (std::fabs(v[bounds[k]] - v[bounds[k - 1]]) < min_delta_b) {
        bounds.erase(bounds.begin() + static_cast<std::ptrdiff_t>(k == 1 ? 1 : k - 1));
        changed = true;
        break;
      }
    }
    if (changed) continue;
    for (std::size_t k = 1; k + 1 < bounds.size(); ++k) {
      const double dl = v[bounds[k]] - v[bounds[k - 1]];
      const double dr = v[bounds[k + 1]] - v[bounds[k]];
      if ((dl >= 0.0) == (dr >= 0.0)) {
        bounds.erase(bounds.begin() + static_cast<std::ptrdiff_t>(k));
        changed = true;
        break;
      }
    }
  }

  if (bounds.size() < 3)
    throw NumericError("segment: fewer than two turning points (degenerate excitation)");

  Segmentation out;
  out.min_delta_b = min_delta_b;
  out.loops.reserve(bounds.size() - 1);
  for (std::size_t j = 0; j + 1 < bounds.size(); ++j) {
    HalfLoop loop;
    loop.start_idx = bounds[j];
    loop.end_idx = bounds[j + 1];
    loop.b_start = v[loop.start_idx];
    loop.b_end = v[loop.end_idx];
    loop.delta_b = std::fabs(loop.b_end - loop.b_start);
    loop.duration = static_cast<double>(loop.end_idx - loop.start_idx) * b.dt();
    loop.direction = loop.b_end >= loop.b_start ? 1 : -1;
    loop.f_eq = 1.0 / (2.0 * loop.duration);
    out.loops.push_back(loop);
  }
  return out;
}

LoopCoordinates loop_coordinates(const HalfLoop& loop) {
  return LoopCoordinates{loop.f_eq, loop.delta_b, 0.5 * (loop.b_start + loop.b_end)};
}

}  // namespace coreloss
