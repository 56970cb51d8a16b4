#include "coreloss/loss.hpp"

#include <algorithm>
#include <cmath>

namespace coreloss {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kSqrtPi = 1.7724538509055160272981674833411;
}  // namespace

void SteinmetzParams::validate() const {
  if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("backend.k: must be positive");
  if (!std::isfinite(alpha) || !(alpha > 0.0))
    throw ValidationError("backend.alpha: must be positive");
  if (!std::isfinite(beta) || !(beta > 0.0))
    throw ValidationError("backend.beta: must be positive");
}

std::vector<std::string> SteinmetzParams::sanity_warnings() const {
  std::vector<std::string> w;
  if (alpha < 1.0 || alpha > 3.0)
    w.push_back("backend.alpha outside the typical 1..3 range");
  if (beta < 2.0 || beta > 4.0)
    w.push_back("backend.beta outside the typical 2..4 range");
  if (f_max > 0.0 && f_min > f_max) w.push_back("backend frequency window is empty");
  if (b_max > 0.0 && b_min > b_max) w.push_back("backend flux window is empty");
  return w;
}

double se_power_density(const SteinmetzParams& p, double f, double b_pk) {
  p.validate();
  if (!(f > 0.0)) throw ValidationError("se_power_density: f must be positive");
  if (!(b_pk > 0.0)) throw ValidationError("se_power_density: b_pk must be positive");
  return p.k * std::pow(f, p.alpha) * std::pow(b_pk, p.beta);
}

// integral_0^2pi |cos|^alpha = 2*sqrt(pi)*Gamma((alpha+1)/2)/Gamma((alpha+2)/2)
double igse_ki(const SteinmetzParams& p) {
  p.validate();
  const double cos_integral =
      2.0 * kSqrtPi * std::tgamma(0.5 * (p.alpha + 1.0)) / std::tgamma(0.5 * (p.alpha + 2.0));
  return p.k * std::pow(kTwoPi, 1.0 - p.alpha) / cos_integral;
}

double igse_power_density(const SteinmetzParams& p, const TimeSeries& b) {
  const double ki = igse_ki(p);
  const auto [lo, hi] = min_max(b);
  const double delta_b = hi - lo;
  if (delta_b == 0.0) return 0.0;

  const double dt = b.dt();
  const double inv_dt = 1.0 / dt;
  const auto& v = b.values();
  double acc = 0.0;  // sum |dB/dt|^alpha per interval (midpoint slope, exact for PWL)
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double slope = std::fabs(v[i + 1] - v[i]) * inv_dt;
    if (slope > 0.0) acc += std::pow(slope, p.alpha);
  }
  const double integral = acc * dt;
  const double span = b.span();
  return ki * std::pow(0.5 * delta_b, p.beta - p.alpha) * integral / span;
}

double igse_triangle_energy_density(const SteinmetzParams& p, double f, double delta_b) {
  if (!(f > 0.0)) throw ValidationError("igse_triangle_energy_density: f must be positive");
  if (!(delta_b > 0.0))
    throw ValidationError("igse_triangle_energy_density: delta_b must be positive");
  // |dB/dt| = 2*f*delta_b on both flanks; integrand is constant.
  const double power =
      igse_ki(p) * std::pow(2.0 * f * delta_b, p.alpha) * std::pow(0.5 * delta_b, p.beta - p.alpha);
  return power / f;
}

LossMapTable::LossMapTable(std::vector<double> f_axis, std::vector<double> db_axis,
                           std::vector<double> energy_density, std::vector<double> b_bias)
    : f_axis_(std::move(f_axis)),
      db_axis_(std::move(db_axis)),
      values_(std::move(energy_density)),
      bias_(std::move(b_bias)) {
  if (f_axis_.empty() || db_axis_.empty())
    throw ValidationError("loss map: axes must be non-empty");
  if (values_.size() != f_axis_.size() * db_axis_.size())
    throw ValidationError("loss map: grid size does not match axes");
  if (!bias_.empty() && bias_.size() != values_.size())
    throw ValidationError("loss map: bias column size does not match grid");
  auto strictly_increasing_positive = [](const std::vector<double>& a) {
    if (!(a.front() > 0.0)) return false;
    for (std::size_t i = 1; i < a.size(); ++i)
      if (!(a[i] > a[i - 1])) return false;
    return true;
  };
  if (!strictly_increasing_positive(f_axis_))
    throw ValidationError("loss map: f axis must be positive and strictly increasing");
  if (!strictly_increasing_positive(db_axis_))
    throw ValidationError("loss map: delta_b axis must be positive and strictly increasing");
  for (double v : values_)
    if (!(v > 0.0) || !std::isfinite(v))
      throw ValidationError("loss map: energy densities must be positive");

  log_f_.reserve(f_axis_.size());
  for (double v : f_axis_) log_f_.push_back(std::log(v));
  log_db_.reserve(db_axis_.size());
  for (double v : db_axis_) log_db_.push_back(std::log(v));
  log_v_.reserve(values_.size());
  for (double v : values_) log_v_.push_back(std::log(v));
}

namespace {

// Index of the cell containing q (axis size >= 1). Queries beyond one decade
// outside the axis throw; closer overhang extrapolates from the edge cell.
std::size_t locate(const std::vector<double>& axis, double q, LookupPolicy policy,
                   const char* axis_name, double* q_inout) {
  if (!(q > 0.0) || !std::isfinite(q))
    throw ValidationError(std::string("loss map lookup: ") + axis_name + " must be positive");
  const double lo = axis.front(), hi = axis.back();
  if (q < lo || q > hi) {
    const double decades = q < lo ? std::log10(lo / q) : std::log10(q / hi);
    if (policy == LookupPolicy::clamp) {
      *q_inout = std::clamp(q, lo, hi);
    } else if (decades > 1.0) {
      throw ValidationError(std::string("loss map lookup: ") + axis_name +
                            " more than one decade outside the table");
    }
  }
  const double q_used = *q_inout;
  if (axis.size() == 1) return 0;
  auto it = std::upper_bound(axis.begin(), axis.end(), q_used);
  std::size_t idx = static_cast<std::size_t>(it - axis.begin());
  if (idx == 0) return 0;
  if (idx >= axis.size()) return axis.size() - 2;
  return idx - 1;
}

}  // namespace

double LossMapTable::lookup(double f, double delta_b, LookupPolicy policy) const {
  double fq = f, dq = delta_b;
  const std::size_t fi = locate(f_axis_, f, policy, "f", &fq);
  const std::size_t di = locate(db_axis_, delta_b, policy, "delta_b", &dq);
  const std::size_t nd = db_axis_.size();

  const double lf = std::log(fq);
  const double ld = std::log(dq);

  double tf = 0.0, td = 0.0;
  std::size_t fi1 = fi, di1 = di;
  if (f_axis_.size() > 1) {
    fi1 = fi + 1;
    tf = (lf - log_f_[fi]) / (log_f_[fi1] - log_f_[fi]);
  }
  if (db_axis_.size() > 1) {
    di1 = di + 1;
    td = (ld - log_db_[di]) / (log_db_[di1] - log_db_[di]);
  }

  const double v00 = log_v_[fi * nd + di];
  const double v01 = log_v_[fi * nd + di1];
  const double v10 = log_v_[fi1 * nd + di];
  const double v11 = log_v_[fi1 * nd + di1];
  const double interp =
      (1.0 - tf) * ((1.0 - td) * v00 + td * v01) + tf * ((1.0 - td) * v10 + td * v11);
  return std::exp(interp);
}

SteinmetzIgseBackend::SteinmetzIgseBackend(SteinmetzParams p) : params_(p) {
  params_.validate();
}

double SteinmetzIgseBackend::full_loop_energy_density(double f_eq, double delta_b,
                                                      double /*b_bias*/) const {
  return igse_triangle_energy_density(params_, f_eq, delta_b);
}

LossMapBackend::LossMapBackend(LossMapTable table, LookupPolicy policy)
    : table_(std::move(table)), policy_(policy) {}

double LossMapBackend::full_loop_energy_density(double f_eq, double delta_b,
                                                double /*b_bias*/) const {
  return table_.lookup(f_eq, delta_b, policy_);
}

double half_loop_loss(const LossBackend& backend, const HalfLoop& loop, const CoreSpec& core) {
  if (!(loop.delta_b > 0.0)) return 0.0;  // flat loop sweeps no area
  const LoopCoordinates c = loop_coordinates(loop);
  return 0.5 * core.ve * backend.full_loop_energy_density(c.f_eq, c.delta_b, c.b_bias);
}

LossMapTable synth_loss_map(const SteinmetzParams& p, const std::vector<double>& f_axis,
                            const std::vector<double>& db_axis) {
  p.validate();
  std::vector<double> grid;
  grid.reserve(f_axis.size() * db_axis.size());
  for (double f : f_axis)
    for (double db : db_axis) grid.push_back(igse_triangle_energy_density(p, f, db));
  return LossMapTable(f_axis, db_axis, std::move(grid));
}

}  // namespace coreloss
