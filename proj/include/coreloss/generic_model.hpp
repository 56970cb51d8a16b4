#pragma once

#include <array>
#include <string>
#include <vector>

#include "coreloss/timeseries.hpp"

namespace coreloss {

// Normalized instantaneous-loss shape over one excitation cycle: a truncated
// Fourier series in the cycle phase theta,
//   P(theta) = a0 + sum_{n=1..6} a[n-1]*cos(n*(theta+phase_offset))
//                 + b[n-1]*sin(n*(theta+phase_offset)).
// w records the source time scaling (theta = w*t); evaluation is theta-native
// so w never enters the arithmetic. The material tag guards against silently
// reusing a shape fitted on one material for another.
struct GenericLossModel {
  std::string material;
  double a0 = 0.0;
  std::array<double, 6> a{};
  std::array<double, 6> b{};
  double w = 1.0;
  double phase_offset = 0.0;
  bool normalized = false;

  void validate() const;
};

struct ModelEval {
  double raw = 0.0;      // pre-clamp series value
  double clamped = 0.0;  // max(raw, 0); the distribution weight
};

ModelEval eval(const GenericLossModel& m, double theta);

// One labeled loss-per-cycle shape used for fitting, resampled internally to a
// uniform phase grid. The series spans exactly one cycle, t0 at the
// excitation's rising zero crossing.
struct NormalizedLossSet {
  std::string label;
  TimeSeries p;
};

struct FitResult {
  GenericLossModel model;
  double r_squared = 0.0;
  bool poor_fit = false;  // r^2 < 0.9
};

// Divides by the trapezoid mean so the result has unit mean; a non-positive
// mean is a validation error.
TimeSeries normalize(const TimeSeries& p);

// Least-squares Fourier projection of the across-set average onto
// n_harmonics <= 6 harmonics.
FitResult fit(const std::vector<NormalizedLossSet>& sets, int n_harmonics = 6);

struct Distribution {
  std::vector<double> e_cycle;   // joules, one per switching cycle, sum == q_total
  double clamp_fraction = 0.0;   // share of quadrature points clamped at zero
  bool degenerate = false;       // model non-positive everywhere: uniform split
};

// Splits q_total [J] over n_cycles switching cycles proportionally to the
// clamped model integral over each cycle's phase window, then renormalizes so
// the sum matches q_total to <= 1e-12 relative.
Distribution distribute(const GenericLossModel& m, double q_total, int n_cycles);

// Rescales coefficients so the pre-clamp mean (a0) is exactly 1.
GenericLossModel rescaled_to_unit_mean(const GenericLossModel& m);

// Bundled fitted shape for the Mix-26 iron powder material.
GenericLossModel mix26_model();

// JSON model file round-trip: {material, a0, a[6], b[6], w, phase_offset, normalized}.
GenericLossModel load_model_json(const std::string& path);
void save_model_json(const GenericLossModel& m, const std::string& path);

// Non-empty when the model's material tag differs from the requested material.
std::string material_mismatch_warning(const GenericLossModel& m, const std::string& material);

}  // namespace coreloss
