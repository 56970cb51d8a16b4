#pragma once

#include "coreloss/timeseries.hpp"

namespace coreloss {

// Two-level sine-triangle PWM drive. f_sw = f0 * ratio; the triangle carrier
// has its rising zero at t = 0, coincident with the sine reference's rising
// zero. samples_per_sw_cycle must be even (the sampled period is mirror
// antisymmetric about its midpoint; see synth_spwm).
struct SpwmConfig {
  double vdc = 0.0;              // volts, > 0
  double f0 = 0.0;               // fundamental, Hz, > 0
  int ratio = 0;                 // f_sw / f0, integer >= 2
  double m = 0.0;                // modulation index in [0, 1]
  int samples_per_sw_cycle = 1000;  // even, >= 100

  void validate() const;  // throws ValidationError naming the offending field
};

struct SineConfig {
  double amplitude = 0.0;        // peak, > 0
  double f = 0.0;                // Hz, > 0
  int cycles = 1;                // >= 1
  int samples_per_cycle = 10000; // >= 1000

  void validate() const;
};

// Naturally sampled SPWM over `cycles` fundamental periods, closed span
// (cycles*ratio*samples_per_sw_cycle + 1 samples). Every sample is exactly
// +vdc or -vdc and the trapezoidal volt-second integral over each fundamental
// period is exactly zero.
TimeSeries synth_spwm(const SpwmConfig& cfg, int cycles);

// amplitude*sin(2*pi*f*t), closed span (cycles*samples_per_cycle + 1 samples).
TimeSeries synth_sine(const SineConfig& cfg);

// Periodic steady-state current of a series RL driven by v:
//   L di/dt + R i = v
// For r_series = 0 the zero-mean integral of v/L; for r_series > 0 the
// periodic fixed point of one-period trapezoidal integration (tolerance 1e-9
// relative, NumericError after 1000 period iterations without convergence).
// The span of v is treated as one period (wrap sample included).
TimeSeries inductor_current(const TimeSeries& v, double inductance, double r_series);

}  // namespace coreloss
