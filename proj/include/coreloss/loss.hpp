#pragma once

#include <memory>
#include <string>
#include <vector>

#include "coreloss/cwh.hpp"
#include "coreloss/magnetics.hpp"
#include "coreloss/timeseries.hpp"

namespace coreloss {

// Steinmetz material fit: P = k * f^alpha * B_pk^beta [W/m^3], valid inside
// the stated fit window.
struct SteinmetzParams {
  double k = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double f_min = 0.0, f_max = 0.0;  // Hz; 0,0 = unspecified
  double b_min = 0.0, b_max = 0.0;  // T;  0,0 = unspecified

  void validate() const;  // k > 0 and finite exponents are hard errors
  // Non-fatal oddities (alpha outside [1,3], beta outside [2,4], empty window).
  std::vector<std::string> sanity_warnings() const;
};

// Average loss density of a sinusoid at frequency f and peak amplitude b_pk.
double se_power_density(const SteinmetzParams& p, double f, double b_pk);

// iGSE normalization constant for the (delta_b/2)^(beta-alpha) convention:
//   k_i = k * (2*pi)^(1-alpha) / integral_0^2pi |cos theta|^alpha dtheta,
// so a pure sinusoid reproduces the Steinmetz value exactly.
double igse_ki(const SteinmetzParams& p);

// Time-average loss density of an arbitrary B(t) treated as one loop:
//   (1/T) * integral k_i * |dB/dt|^alpha * (delta_b/2)^(beta-alpha) dt
// with delta_b the global peak-to-peak swing. Slopes come from first
// differences (exact for piecewise-linear B). A flat trajectory returns 0.
double igse_power_density(const SteinmetzParams& p, const TimeSeries& b);

// Energy density of one full symmetric triangular loop, J/m^3 per cycle.
double igse_triangle_energy_density(const SteinmetzParams& p, double f, double delta_b);

enum class LookupPolicy { error, clamp };

// Rectangular grid of full-loop energy density over (f, delta_b), interpolated
// bilinearly in log-log space. Exact at the nodes; queries beyond one decade
// outside an axis throw (or clamp, per policy). An optional b_bias column is
// carried for file fidelity but ignored by interpolation.
class LossMapTable {
 public:
  LossMapTable(std::vector<double> f_axis, std::vector<double> db_axis,
               std::vector<double> energy_density  /* row-major: f outer */,
               std::vector<double> b_bias = {});

  double lookup(double f, double delta_b, LookupPolicy policy = LookupPolicy::error) const;

  const std::vector<double>& f_axis() const { return f_axis_; }
  const std::vector<double>& db_axis() const { return db_axis_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& b_bias() const { return bias_; }
  double at(std::size_t fi, std::size_t di) const { return values_[fi * db_axis_.size() + di]; }

 private:
  std::vector<double> f_axis_, db_axis_, values_, bias_;
  std::vector<double> log_f_, log_db_, log_v_;
};

// Prices one full symmetric loop (f_eq, delta_b); the CWH half-loop rule takes
// half of it. b_bias is accepted for future bias-aware tables and ignored by
// the bundled backends.
class LossBackend {
 public:
  virtual ~LossBackend() = default;
  virtual double full_loop_energy_density(double f_eq, double delta_b, double b_bias) const = 0;
  virtual std::string name() const = 0;
};

class SteinmetzIgseBackend final : public LossBackend {
 public:
  explicit SteinmetzIgseBackend(SteinmetzParams p);
  double full_loop_energy_density(double f_eq, double delta_b, double b_bias) const override;
  std::string name() const override { return "steinmetz-igse"; }
  const SteinmetzParams& params() const { return params_; }

 private:
  SteinmetzParams params_;
};

class LossMapBackend final : public LossBackend {
 public:
  LossMapBackend(LossMapTable table, LookupPolicy policy = LookupPolicy::error);
  double full_loop_energy_density(double f_eq, double delta_b, double b_bias) const override;
  std::string name() const override { return "lossmap"; }
  const LossMapTable& table() const { return table_; }

 private:
  LossMapTable table_;
  LookupPolicy policy_;
};

// Joules of one half loop: 0.5 * ve * full-loop energy density at the loop's
// equivalent-sinusoid coordinates.
double half_loop_loss(const LossBackend& backend, const HalfLoop& loop, const CoreSpec& core);

// Table filled with iGSE triangular-loop energy densities on the given axes.
LossMapTable synth_loss_map(const SteinmetzParams& p, const std::vector<double>& f_axis,
                            const std::vector<double>& db_axis);

}  // namespace coreloss
