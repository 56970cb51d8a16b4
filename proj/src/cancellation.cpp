#include "coreloss/cancellation.hpp"

#include <cmath>

#include "coreloss/cwh.hpp"
#include "coreloss/kernels.hpp"

namespace coreloss {

void CancellationCircuit::validate() const {
  if (r_c < 0.0 || !std::isfinite(r_c))
    throw ValidationError("circuit.r_c_ohm: must be >= 0");
  if (!(l_m1 > 0.0) || !std::isfinite(l_m1))
    throw ValidationError("circuit.l_m1_H: must be positive");
  if (!(l_m2 > 0.0) || !std::isfinite(l_m2))
    throw ValidationError("circuit.l_m2_H: must be positive");
  if (r_cu1 < 0.0 || r_cu2 < 0.0 || l_leak < 0.0)
    throw ValidationError("circuit: copper and leakage terms must be >= 0");
}

CancellationTrace run(const CancellationCircuit& c, const TimeSeries& i_pri) {
  c.validate();
  TimeSeries didt = differentiate(i_pri);
  TimeSeries v_iut = lin_comb(c.r_c, i_pri, c.l_m1, didt, "V");
  TimeSeries v_ref = scaled(didt, c.l_m2, "V");
  TimeSeries v_diff = lin_comb(1.0, v_iut, -1.0, v_ref, "V");
  TimeSeries p = multiply(v_diff, i_pri);

  CancellationTrace out{std::move(i_pri), std::move(v_iut), std::move(v_ref),
                        std::move(v_diff), std::move(p)};
  out.e_total = trapezoid(out.p_inst);

  // Weights 1/0.5/0 keep the split exact: p*w_c + p*w_d == p sample by sample.
  const auto phases = classify_phase(out.v_iut, out.i);
  const std::size_t n = out.p_inst.size();
  std::vector<double> charge(n);
  std::vector<double> discharge(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = phases[k] == Phase::charging ? 1.0
                     : phases[k] == Phase::neutral ? 0.5
                                                   : 0.0;
    charge[k] = out.p_inst[k] * w;
    discharge[k] = out.p_inst[k] * (1.0 - w);
  }
  TimeSeries pc(out.p_inst.t0(), out.p_inst.dt(), std::move(charge), "W");
  TimeSeries pd(out.p_inst.t0(), out.p_inst.dt(), std::move(discharge), "W");
  out.e_charge = trapezoid(pc);
  out.e_discharge = trapezoid(pd);
  return out;
}

TimeSeries error_bound(const CancellationCircuit& c, const TimeSeries& i_pri) {
  c.validate();
  TimeSeries didt = differentiate(i_pri);
  TimeSeries prod = multiply(didt, i_pri);
  return scaled(prod, c.l_m1 - c.l_m2, "W");
}

double calibrate_r_c(double p_avg, double i_pk) {
  if (!(i_pk > 0.0)) throw ValidationError("calibrate_r_c: i_pk must be positive");
  if (p_avg < 0.0) throw ValidationError("calibrate_r_c: p_avg must be >= 0");
  return 2.0 * p_avg / (i_pk * i_pk);
}

EmulationResult emulate_major_loop(const CoreSpec& core, const CancellationCircuit& c,
                                   const SineConfig& sine) {
  core.validate();
  c.validate();
  sine.validate();

  TimeSeries v = synth_sine(sine);
  TimeSeries i = inductor_current(v, c.l_m1, 0.0);
  CancellationCircuit matched = c;
  matched.l_m2 = matched.l_m1;
  CancellationTrace trace = run(matched, i);

  EmulationResult out;
  out.e_cycle = trace.e_total / static_cast<double>(sine.cycles);
  const auto [ilo, ihi] = min_max(trace.i);
  out.i_pk = std::max(std::fabs(ilo), std::fabs(ihi));
  const double omega = 2.0 * 3.14159265358979323846 * sine.f;
  out.b_pk = sine.amplitude / (omega * static_cast<double>(core.n1) * core.ae);
  return out;
}

std::vector<double> half_loop_energies(const TimeSeries& p, const TimeSeries& b) {
  require_aligned(p, b, "half_loop_energies");
  Segmentation seg = segment(b);
  std::vector<double> out;
  out.reserve(seg.loops.size());
  const auto& pv = p.values();
  const double dt = p.dt();
  for (const HalfLoop& loop : seg.loops) {
    double acc = 0.0;
    for (std::size_t i = loop.start_idx; i < loop.end_idx; ++i)
      acc += 0.5 * dt * (pv[i] + pv[i + 1]);
    out.push_back(acc);
  }
  return out;
}

}  // namespace coreloss
