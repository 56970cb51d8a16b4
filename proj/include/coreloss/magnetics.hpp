#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coreloss/timeseries.hpp"

namespace coreloss {

// Wound-core geometry. All SI: meters, square meters, cubic meters.
struct CoreSpec {
  std::string name;
  int n1 = 0;        // excitation winding turns
  int n2 = 0;        // sensing winding turns
  double ae = 0.0;   // effective cross section, m^2
  double le = 0.0;   // effective path length, m
  double ve = 0.0;   // effective volume, m^3

  void validate() const;           // hard errors on non-physical values
  bool geometry_consistent() const;  // |ve - ae*le| within 20 %
};

// Bundled cores. Throws ValidationError for unknown names.
CoreSpec core_preset(const std::string& name);
std::vector<std::string> core_preset_names();

// Aligned B(t) [T] and H(t) [A/m] with the source geometry.
struct BhTrajectory {
  TimeSeries b;
  TimeSeries h;
  CoreSpec core;
};

enum class Phase : std::int8_t { discharging = -1, neutral = 0, charging = 1 };

// Per switching cycle: net swept energy, the CWH minor estimate, and the
// remainder. e_total == e_minor + e_major_plus_reactive by definition.
struct LoopEnergyBreakdown {
  double e_total = 0.0;
  double e_minor = 0.0;
  double e_major_plus_reactive = 0.0;
};

// B from the volt-second integral of the sensing winding, H from the
// excitation current:
//   B = integral(v_sec) / (n2*ae),  H = n1*i_pri / le.
// remove_dc subtracts the mean from v_sec first (periodic trajectories) and
// centers B on zero mean; with remove_dc = false the raw integral from B = 0
// is returned (plain volt-second law).
BhTrajectory to_bh(const TimeSeries& v_sec, const TimeSeries& i_pri, const CoreSpec& core,
                   bool remove_dc = true);

// ve * integral(H dB) over sample indices [i0, i1] of the trajectory, joules.
double segment_energy(const BhTrajectory& traj, std::size_t i0, std::size_t i1);

// Sign of v*i per sample: energy flowing into the device (charging),
// out (discharging), or an exact zero (neutral).
std::vector<Phase> classify_phase(const TimeSeries& v, const TimeSeries& i);

// Assembles the per-cycle breakdown from the net swept energy over the cycle's
// index range and an externally computed minor-loop estimate.
LoopEnergyBreakdown loop_energy_breakdown(const BhTrajectory& traj, std::size_t i0,
                                          std::size_t i1, double e_minor);

}  // namespace coreloss
