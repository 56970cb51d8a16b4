#pragma once

#include <string>
#include <vector>

#include "coreloss/cancellation.hpp"
#include "coreloss/cwh.hpp"
#include "coreloss/excitation.hpp"
#include "coreloss/generic_model.hpp"
#include "coreloss/loss.hpp"
#include "coreloss/magnetics.hpp"
#include "coreloss/timeseries.hpp"

namespace coreloss {

// Where the major-loop (fundamental) energy per cycle comes from: a directly
// supplied datasheet density at the operating point, a Steinmetz fit, or a
// loop-energy backend evaluated at the fundamental coordinates.
struct LossSource {
  enum class Kind { datasheet, steinmetz, backend };
  Kind kind = Kind::datasheet;
  double density_w_m3 = 0.0;           // datasheet
  SteinmetzParams se;                  // steinmetz
  const LossBackend* table = nullptr;  // backend (non-owning)

  static LossSource from_density_w_m3(double density);
  static LossSource from_density_mw_cm3(double density);  // 1 mW/cm^3 = 1000 W/m^3
  static LossSource from_steinmetz(const SteinmetzParams& p);
  static LossSource from_backend(const LossBackend& b);

  void validate() const;
};

struct CycleRow {
  int cycle = 0;
  double t_start = 0.0;  // s
  double e_minor = 0.0;  // J
  double e_major = 0.0;  // J
  double e_total = 0.0;  // e_minor + e_major
};

// Per-switching-cycle loss split. Column sums are the totals; every entry is
// nonnegative for valid configurations.
struct CycleLossReport {
  std::vector<CycleRow> rows;
  double e_minor_total = 0.0;
  double e_major_total = 0.0;  // equals the q_total fed to distribute, exactly
  double e_grand_total = 0.0;
  std::string backend_id;
  std::string model_id;
};

// Cross-validation triple for the fundamental-loop energy per cycle.
struct MajorLoopComparison {
  double method1_j = 0.0;            // total minus minor
  double method2_datasheet_j = 0.0;  // equivalent-sinusoid lookup
  double method2_emulated_j = 0.0;   // cancellation emulation
  bool method1_independent = true;   // false when no independent total existed
  bool method1_negative = false;

  // Largest |a-b|/max(|a|,|b|) over the three pairs.
  double max_pairwise_rel() const;
};

struct MinorFlowResult {
  std::vector<double> e_cycle;  // J per switching cycle
  std::vector<double> e_loop;   // J per half loop, in segmentation order
  Segmentation seg;
  double total = 0.0;
};

// High-frequency flow: B from the volt-second integral of v, half-loop
// segmentation, each half loop priced by the backend, energies summed into
// the switching cycle containing the loop's start time. v spans exactly
// n_cycles switching cycles (wrap sample included).
MinorFlowResult minor_flow(const TimeSeries& v, const CoreSpec& core, const LossBackend& backend,
                           int n_cycles);

struct MajorFlowResult {
  double q_total = 0.0;         // J per fundamental cycle
  std::vector<double> e_cycle;  // distributed over switching cycles
  Tone fundamental;             // of the voltage
  double f0 = 0.0;
  double b1 = 0.0;              // fundamental flux amplitude, T
  Distribution dist;            // clamp / degeneracy diagnostics
};

// Low-frequency flow: fundamental tone of v (the span is one fundamental
// period), equivalent flux amplitude b1 = V1/(2*pi*f0*n2*ae), q_total from the
// loss source at (f0, b1), then distributed over the switching cycles by the
// shape model.
MajorFlowResult major_flow(const TimeSeries& v, const CoreSpec& core, const LossSource& source,
                           const GenericLossModel& model, int n_cycles);

struct Method1Result {
  double e = 0.0;
  bool negative_warning = false;  // minor exceeded total: inconsistent inputs
};

// Major loop by subtraction. Inputs must be nonnegative; a negative result is
// returned as-is with the warning flag set.
Method1Result method1_major(double total_j, double minor_total_j);

struct WorkflowConfig {
  enum class Drive { spwm, sine };
  Drive drive = Drive::spwm;
  SpwmConfig spwm;                // drive == spwm
  SineConfig sine;                // drive == sine
  double inductance = 0.0;        // magnetizing inductance seen by the drive, H
  double r_series = 0.0;          // ohms
  bool emulate = true;            // run the cancellation emulation for method 2
  double emulation_l_m = 0.0;     // H; 0 = reuse inductance

  void validate() const;
};

struct WorkflowResult {
  CycleLossReport report;
  MajorLoopComparison comparison;
  BhTrajectory traj;          // full-resolution trajectory of the run
  TimeSeries v;               // synthesized drive voltage
  Segmentation seg;           // minor decomposition; empty loops for sine drive
  MajorFlowResult major;
  double minor_total = 0.0;
  EmulationResult emulation;  // zero when emulation disabled
  bool low_ratio_warning = false;       // carrier ratio < 8: fundamental bin
                                        // absorbs switching-sideband energy
  bool distribution_degenerate = false;
};

// One fundamental cycle end to end: synthesize the drive, run both flows,
// assemble the per-cycle report, and compute the three-way major-loop
// comparison. Method 1 subtracts the minor sum from an independent total
// built as minors plus the outer loop priced at the full envelope swing of B;
// when the backend cannot price that loop it degrades to the method-2 total
// and says so via method1_independent.
WorkflowResult run_workflow(const WorkflowConfig& cfg, const CoreSpec& core,
                            const LossBackend& backend, const GenericLossModel& model,
                            const LossSource& source);

// Measured-totals fixture: method 1 from the subtraction, method 2 values
// passed through. Units are the caller's (consistent across all four).
MajorLoopComparison fixture_comparison(double total_j, double minor_j, double datasheet_j,
                                       double emulated_j);

}  // namespace coreloss
