#pragma once

#include "coreloss/excitation.hpp"
#include "coreloss/magnetics.hpp"
#include "coreloss/timeseries.hpp"

namespace coreloss {

// Reactive-cancellation bridge: the device under test is modeled as r_c in
// series with magnetizing inductance l_m1; a reference winding of inductance
// l_m2 cancels the reactive voltage. Copper resistances and leakage are
// carried for bookkeeping and excluded from the loss voltage.
struct CancellationCircuit {
  double r_c = 0.0;    // equivalent core-loss resistance, ohms, >= 0
  double l_m1 = 0.0;   // device magnetizing inductance, H, > 0
  double l_m2 = 0.0;   // reference inductance, H, > 0
  double r_cu1 = 0.0;  // winding copper, ohms (bookkeeping only)
  double r_cu2 = 0.0;
  double l_leak = 0.0; // leakage, H (bookkeeping only)

  void validate() const;
  bool matched() const { return l_m1 == l_m2; }
};

// Instantaneous-loss trace. p_inst = v_diff * i with
//   v_iut = r_c*i + l_m1*di/dt,  v_ref = l_m2*di/dt,  v_diff = v_iut - v_ref.
// Energy split: per-sample phase from sign(v_iut*i); neutral samples count
// half into each side so e_charge + e_discharge == e_total identically.
struct CancellationTrace {
  TimeSeries i;
  TimeSeries v_iut;
  TimeSeries v_ref;
  TimeSeries v_diff;
  TimeSeries p_inst;
  double e_total = 0.0;      // trapezoid of p_inst over the span, joules
  double e_charge = 0.0;
  double e_discharge = 0.0;
};

CancellationTrace run(const CancellationCircuit& c, const TimeSeries& i_pri);

// Pointwise residual of an inductance mismatch: the difference between the
// mismatched and matched instantaneous power, (l_m1 - l_m2) * di/dt * i.
// Its peak over a sinusoid of amplitude I at angular frequency w is
// |l_m1 - l_m2| * w * I^2 / 2.
TimeSeries error_bound(const CancellationCircuit& c, const TimeSeries& i_pri);

// Equivalent-sinusoid emulation of a major loop: the sine config is the drive
// voltage; current flows through l_m1 and the loss is r_c*i^2 integrated over
// one cycle. r_c is the caller's calibration, r_c = 2*P_avg / I_pk^2.
struct EmulationResult {
  double e_cycle = 0.0;  // joules per fundamental cycle
  double b_pk = 0.0;     // peak flux swing seen by the core, T
  double i_pk = 0.0;     // peak drive current, A
};

EmulationResult emulate_major_loop(const CoreSpec& core, const CancellationCircuit& c,
                                   const SineConfig& sine);

double calibrate_r_c(double p_avg, double i_pk);

// Energy of p integrated over each monotone half loop of b (same grid).
std::vector<double> half_loop_energies(const TimeSeries& p, const TimeSeries& b);

}  // namespace coreloss
