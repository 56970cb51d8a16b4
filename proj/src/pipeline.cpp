#include "coreloss/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>

#include "coreloss/errors.hpp"

namespace coreloss {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double pair_rel(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

// Steinmetz parameters discoverable from the run, if any: an independent
// full-waveform total for method 1 needs them.
const SteinmetzParams* find_se_params(const LossSource& source, const LossBackend& backend) {
  if (source.kind == LossSource::Kind::steinmetz) return &source.se;
  if (const auto* se = dynamic_cast<const SteinmetzIgseBackend*>(&backend)) return &se->params();
  return nullptr;
}

}  // namespace

LossSource LossSource::from_density_w_m3(double density) {
  LossSource s;
  s.kind = Kind::datasheet;
  s.density_w_m3 = density;
  return s;
}

LossSource LossSource::from_density_mw_cm3(double density) {
  return from_density_w_m3(density * 1000.0);
}

LossSource LossSource::from_steinmetz(const SteinmetzParams& p) {
  LossSource s;
  s.kind = Kind::steinmetz;
  s.se = p;
  return s;
}

LossSource LossSource::from_backend(const LossBackend& b) {
  LossSource s;
  s.kind = Kind::backend;
  s.table = &b;
  return s;
}

void LossSource::validate() const {
  switch (kind) {
    case Kind::datasheet:
      if (!(density_w_m3 > 0.0) || !std::isfinite(density_w_m3))
        throw ValidationError("backend.density: datasheet density must be positive");
      break;
    case Kind::steinmetz:
      se.validate();
      break;
    case Kind::backend:
      if (table == nullptr) throw ValidationError("backend.path: loss backend not set");
      break;
  }
}

double MajorLoopComparison::max_pairwise_rel() const {
  return std::max({pair_rel(method1_j, method2_datasheet_j),
                   pair_rel(method1_j, method2_emulated_j),
                   pair_rel(method2_datasheet_j, method2_emulated_j)});
}

MinorFlowResult minor_flow(const TimeSeries& v, const CoreSpec& core, const LossBackend& backend,
                           int n_cycles) {
  core.validate();
  if (n_cycles < 1) throw ValidationError("pipeline: switching cycle count must be at least 1");
  const std::size_t n = v.size();
  const std::size_t nc = static_cast<std::size_t>(n_cycles);
  if ((n - 1) % nc != 0)
    throw ValidationError("pipeline: span must hold an integer number of switching cycles");
  const std::size_t per_cycle = (n - 1) / nc;

  const TimeSeries i_zero(v.t0(), v.dt(), std::vector<double>(n, 0.0), "A");
  const BhTrajectory traj = to_bh(v, i_zero, core, true);
  Segmentation seg = segment(traj.b);

  MinorFlowResult out{std::vector<double>(nc, 0.0), {}, std::move(seg), 0.0};
  out.e_loop.reserve(out.seg.loops.size());
  for (const HalfLoop& loop : out.seg.loops) {
    const double e = half_loop_loss(backend, loop, core);
    // Cycle ownership by start time; the carrier defines the cycle grid.
    const std::size_t cycle = std::min(loop.start_idx / per_cycle, nc - 1);
    out.e_loop.push_back(e);
    out.e_cycle[cycle] += e;
    out.total += e;
  }
  return out;
}

MajorFlowResult major_flow(const TimeSeries& v, const CoreSpec& core, const LossSource& source,
                           const GenericLossModel& model, int n_cycles) {
  core.validate();
  source.validate();
  if (n_cycles < 1) throw ValidationError("pipeline: switching cycle count must be at least 1");

  // The span is one fundamental period (wrap sample included).
  const double f0 = 1.0 / v.span();
  const Tone tone = fft_fundamental(v, f0);
  const double b1 = tone.amplitude / (kTwoPi * f0 * static_cast<double>(core.n2) * core.ae);

  double q_total = 0.0;
  switch (source.kind) {
    case LossSource::Kind::datasheet:
      q_total = source.density_w_m3 * core.ve / f0;
      break;
    case LossSource::Kind::steinmetz:
      q_total = se_power_density(source.se, f0, b1) * core.ve / f0;
      break;
    case LossSource::Kind::backend:
      q_total = source.table->full_loop_energy_density(f0, 2.0 * b1, 0.0) * core.ve;
      break;
  }

  Distribution dist = distribute(model, q_total, n_cycles);
  MajorFlowResult out;
  out.q_total = q_total;
  out.e_cycle = dist.e_cycle;
  out.fundamental = tone;
  out.f0 = f0;
  out.b1 = b1;
  out.dist = std::move(dist);
  return out;
}

Method1Result method1_major(double total_j, double minor_total_j) {
  if (!std::isfinite(total_j) || total_j < 0.0)
    throw ValidationError("pipeline: total energy must be finite and nonnegative");
  if (!std::isfinite(minor_total_j) || minor_total_j < 0.0)
    throw ValidationError("pipeline: minor-loop energy must be finite and nonnegative");
  Method1Result r;
  r.e = total_j - minor_total_j;
  r.negative_warning = r.e < 0.0;
  return r;
}

void WorkflowConfig::validate() const {
  if (drive == Drive::spwm)
    spwm.validate();
  else
    sine.validate();
  if (!(inductance > 0.0) || !std::isfinite(inductance))
    throw ValidationError("excitation.inductance: must be positive");
  if (r_series < 0.0 || !std::isfinite(r_series))
    throw ValidationError("excitation.r_series: must be nonnegative");
  if (emulation_l_m < 0.0 || !std::isfinite(emulation_l_m))
    throw ValidationError("excitation.emulation_l_m: must be nonnegative");
}

WorkflowResult run_workflow(const WorkflowConfig& cfg, const CoreSpec& core,
                            const LossBackend& backend, const GenericLossModel& model,
                            const LossSource& source) {
  cfg.validate();
  core.validate();
  source.validate();
  model.validate();

  // One fundamental period, closed span. The drive voltage is read on the
  // sensing winding; the bundled cores have equal turn counts so it is the
  // drive itself.
  const bool spwm = cfg.drive == WorkflowConfig::Drive::spwm;
  const int n_cycles = spwm ? cfg.spwm.ratio : 1;
  SineConfig sine_one = cfg.sine;
  sine_one.cycles = 1;
  TimeSeries v = spwm ? synth_spwm(cfg.spwm, 1) : synth_sine(sine_one);

  const TimeSeries i = inductor_current(v, cfg.inductance, cfg.r_series);
  BhTrajectory traj = to_bh(v, i, core, true);

  MinorFlowResult minor{std::vector<double>(1, 0.0), {}, Segmentation{}, 0.0};
  if (spwm) minor = minor_flow(v, core, backend, n_cycles);

  MajorFlowResult major = major_flow(v, core, source, model, n_cycles);

  // Method 1 with an independent total: CWH minors plus the outer loop priced
  // at the full envelope swing of B. The envelope amplitude exceeds the FFT
  // fundamental by the ripple overshoot, which is exactly the share the
  // fundamental extraction misses at low carrier ratios, so this estimate and
  // method 2 converge as the ratio grows. A known material law prices the
  // outer loop as a sinusoid; otherwise the backend's loop table is used, and
  // a table that cannot cover the fundamental coordinates drops method 1 back
  // to the method-2 total.
  Method1Result m1;
  bool m1_independent = true;
  const auto [b_lo, b_hi] = min_max(traj.b);
  const double delta_b_env = b_hi - b_lo;
  if (const SteinmetzParams* se = find_se_params(source, backend)) {
    const double q_env = se_power_density(*se, major.f0, delta_b_env / 2.0) * core.ve / major.f0;
    m1 = method1_major(minor.total + q_env, minor.total);
  } else {
    try {
      const double q_env =
          backend.full_loop_energy_density(major.f0, delta_b_env, 0.0) * core.ve;
      m1 = method1_major(minor.total + q_env, minor.total);
    } catch (const ValidationError&) {
      m1.e = major.q_total;
      m1_independent = false;
    }
  }

  EmulationResult emu;
  double method2_emulated = major.q_total;
  if (cfg.emulate) {
    const double l_m = cfg.emulation_l_m > 0.0 ? cfg.emulation_l_m : cfg.inductance;
    const double v1 = major.fundamental.amplitude;
    const double i_pk = v1 / (kTwoPi * major.f0 * l_m);
    CancellationCircuit circuit;
    circuit.l_m1 = l_m;
    circuit.l_m2 = l_m;
    circuit.r_c = calibrate_r_c(major.q_total * major.f0, i_pk);
    SineConfig em;
    em.amplitude = v1;
    em.f = major.f0;
    em.cycles = 1;
    em.samples_per_cycle = 10000;
    emu = emulate_major_loop(core, circuit, em);
    method2_emulated = emu.e_cycle;
  }

  WorkflowResult out{CycleLossReport{},
                     MajorLoopComparison{},
                     std::move(traj),
                     std::move(v),
                     std::move(minor.seg),
                     std::move(major),
                     minor.total,
                     emu,
                     spwm && cfg.spwm.ratio < 8,
                     false};
  out.distribution_degenerate = out.major.dist.degenerate;

  out.comparison.method1_j = m1.e;
  out.comparison.method2_datasheet_j = out.major.q_total;
  out.comparison.method2_emulated_j = method2_emulated;
  out.comparison.method1_independent = m1_independent;
  out.comparison.method1_negative = m1.negative_warning;

  CycleLossReport& rep = out.report;
  rep.backend_id = backend.name();
  rep.model_id = model.material.empty() ? "unnamed" : model.material;
  rep.rows.resize(static_cast<std::size_t>(n_cycles));
  const std::size_t per_cycle = (out.v.size() - 1) / static_cast<std::size_t>(n_cycles);
  for (std::size_t k = 0; k < rep.rows.size(); ++k) {
    CycleRow& row = rep.rows[k];
    row.cycle = static_cast<int>(k);
    row.t_start = out.v.time_at(k * per_cycle);
    row.e_minor = spwm ? minor.e_cycle[k] : 0.0;
    row.e_major = out.major.e_cycle[k];
    row.e_total = row.e_minor + row.e_major;
    rep.e_minor_total += row.e_minor;
    rep.e_major_total += row.e_major;
  }
  rep.e_grand_total = rep.e_minor_total + rep.e_major_total;
  return out;
}

MajorLoopComparison fixture_comparison(double total_j, double minor_j, double datasheet_j,
                                       double emulated_j) {
  if (!std::isfinite(datasheet_j) || datasheet_j < 0.0)
    throw ValidationError("pipeline: datasheet energy must be finite and nonnegative");
  if (!std::isfinite(emulated_j) || emulated_j < 0.0)
    throw ValidationError("pipeline: emulated energy must be finite and nonnegative");
  const Method1Result m1 = method1_major(total_j, minor_j);
  MajorLoopComparison c;
  c.method1_j = m1.e;
  c.method2_datasheet_j = datasheet_j;
  c.method2_emulated_j = emulated_j;
  c.method1_independent = true;
  c.method1_negative = m1.negative_warning;
  return c;
}

}  // namespace coreloss
