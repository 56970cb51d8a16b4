#pragma once

#include <cstddef>
#include <vector>

#include "coreloss/timeseries.hpp"

namespace coreloss {

// One monotone stretch of B(t) between consecutive dB/dt polarity reversals.
// Under the composite waveform hypothesis it prices as half of a symmetric
// full loop of the same delta_b at f_eq = 1/(2*duration).
struct HalfLoop {
  std::size_t start_idx = 0;  // sample index of the opening extremum
  std::size_t end_idx = 0;    // sample index of the closing extremum
  double delta_b = 0.0;       // |b_end - b_start|, teslas, > 0
  double duration = 0.0;      // (end_idx - start_idx) * dt, seconds
  int direction = 0;          // +1 rising, -1 falling
  double b_start = 0.0;
  double b_end = 0.0;
  double f_eq = 0.0;          // 1 / (2*duration)
};

struct Segmentation {
  std::vector<HalfLoop> loops;   // consecutive, tiling the span with no gaps
  double min_delta_b = 0.0;      // the noise guard actually applied
};

// Equivalent-sinusoid coordinates of a half loop: frequency, peak-to-peak
// swing, and loop-center bias.
struct LoopCoordinates {
  double f_eq = 0.0;
  double delta_b = 0.0;
  double b_bias = 0.0;  // (b_start + b_end) / 2
};

// Splits b at dB/dt sign changes. Segments with delta_b below min_delta_b are
// merged into their preceding neighbor (the first one merges forward), so
// sensor noise does not fragment the trajectory. Plateau intervals attach to
// the preceding segment (a leading plateau to the first). Throws NumericError
// when no interior polarity reversal exists (degenerate excitation), which
// also rejects non-periodic monotone trajectories.
Segmentation segment(const TimeSeries& b, double min_delta_b);

// Noise guard defaulting: 1e-4 of the peak-to-peak range.
Segmentation segment(const TimeSeries& b);
double default_min_delta_b(const TimeSeries& b);

LoopCoordinates loop_coordinates(const HalfLoop& loop);

}  // namespace coreloss
