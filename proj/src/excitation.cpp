#include "coreloss/excitation.hpp"

#include <cmath>
#include <cstdint>

#include "coreloss/kernels.hpp"

namespace coreloss {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Triangle with a rising zero at phase 0, peak +1 at 1/4, trough -1 at 3/4.
// Evaluated from an exact rational phase so carrier samples carry no
// trig-library rounding.
double tri0(double s) {
  if (s <= 0.25) return 4.0 * s;
  if (s <= 0.75) return 2.0 - 4.0 * s;
  return 4.0 * s - 4.0;
}

}  // namespace

void SpwmConfig::validate() const {
  if (!(vdc > 0.0) || !std::isfinite(vdc))
    throw ValidationError("excitation.vdc_V: must be positive");
  if (!(f0 > 0.0) || !std::isfinite(f0))
    throw ValidationError("excitation.f0_hz: must be positive");
  if (ratio < 2) throw ValidationError("excitation.ratio: must be an integer >= 2");
  if (!(m >= 0.0 && m <= 1.0) || !std::isfinite(m))
    throw ValidationError("excitation.m: must be in [0, 1]");
  if (samples_per_sw_cycle < 100)
    throw ValidationError("excitation.samples_per_sw_cycle: must be >= 100");
  if (samples_per_sw_cycle % 2 != 0)
    throw ValidationError("excitation.samples_per_sw_cycle: must be even");
}

void SineConfig::validate() const {
  if (!(amplitude > 0.0) || !std::isfinite(amplitude))
    throw ValidationError("excitation.amplitude_V: must be positive");
  if (!(f > 0.0) || !std::isfinite(f))
    throw ValidationError("excitation.f_hz: must be positive");
  if (cycles < 1) throw ValidationError("excitation.cycles: must be >= 1");
  if (samples_per_cycle < 1000)
    throw ValidationError("excitation.samples_per_cycle: must be >= 1000");
}

// One fundamental period is built as follows. The comparator value is
// sign(m*sin(2*pi*j/N) - carrier(j)); at the two structural tie instants
// (t = 0 and t = T0/2 the reference and carrier cross zero together) a square
// wave sample is ambiguous, and the choice matters: the continuous waveform is
// exactly antisymmetric about the half period for this carrier phase, so the
// second half is generated by mirroring the first (v[N-j] = -v[j]), which
// assigns the left limit at t = 0 and the right limit at t = T0/2. The
// trapezoidal volt-second integral of the sampled period then cancels
// identically instead of inheriting O(dt) switching-edge quantization.
// For m = 0 the comparator degenerates to the carrier's left-limit square,
// which is exactly carrier-periodic (zero fundamental bin by orthogonality).
TimeSeries synth_spwm(const SpwmConfig& cfg, int cycles) {
  cfg.validate();
  if (cycles < 1) throw ValidationError("excitation.cycles: must be >= 1");

  const std::int64_t N = static_cast<std::int64_t>(cfg.ratio) * cfg.samples_per_sw_cycle;
  const std::int64_t R = cfg.ratio;
  std::vector<double> period(static_cast<std::size_t>(N));

  if (cfg.m == 0.0) {
    for (std::int64_t j = 0; j < N; ++j) {
      const std::int64_t r = (j * R) % N;
      const double sc = static_cast<double>(r) / static_cast<double>(N);
      period[j] = (sc == 0.0 || sc > 0.5) ? cfg.vdc : -cfg.vdc;
    }
  } else {
    period[0] = cfg.vdc;
    const std::int64_t half = N / 2;
    for (std::int64_t j = 1; j < half; ++j) {
      const double ref = cfg.m * std::sin(kTwoPi * static_cast<double>(j) / static_cast<double>(N));
      const std::int64_t r = (j * R) % N;
      const double carrier = tri0(static_cast<double>(r) / static_cast<double>(N));
      period[j] = (ref >= carrier) ? cfg.vdc : -cfg.vdc;
    }
    period[half] = -cfg.vdc;
    for (std::int64_t j = 1; j < half; ++j) period[N - j] = -period[j];
  }

  const std::size_t total = static_cast<std::size_t>(N) * cycles + 1;
  std::vector<double> out(total);
  for (std::size_t i = 0; i + 1 < total; ++i) out[i] = period[i % period.size()];
  out[total - 1] = period[0];

  const double dt = 1.0 / (cfg.f0 * static_cast<double>(N));
  return TimeSeries(0.0, dt, std::move(out), "V");
}

TimeSeries synth_sine(const SineConfig& cfg) {
  cfg.validate();
  const std::int64_t spc = cfg.samples_per_cycle;
  const std::size_t total = static_cast<std::size_t>(spc) * cfg.cycles + 1;
  std::vector<double> out(total);
  for (std::size_t i = 0; i < total; ++i) {
    const std::int64_t r = static_cast<std::int64_t>(i) % spc;
    out[i] = cfg.amplitude * std::sin(kTwoPi * static_cast<double>(r) / static_cast<double>(spc));
  }
  const double dt = 1.0 / (cfg.f * static_cast<double>(spc));
  return TimeSeries(0.0, dt, std::move(out), "V");
}

namespace {

// One period of trapezoidal (Crank-Nicolson) integration of L di/dt + R i = v.
double advance_period(const TimeSeries& v, double L, double R, double i0,
                      std::vector<double>* out) {
  const std::size_t n = v.size();
  const double dt = v.dt();
  const double h = R * dt / (2.0 * L);
  const double gain_v = dt / (2.0 * L);
  const double a = (1.0 - h) / (1.0 + h);
  const double b = gain_v / (1.0 + h);
  double cur = i0;
  if (out) (*out)[0] = cur;
  for (std::size_t k = 1; k < n; ++k) {
    cur = a * cur + b * (v[k - 1] + v[k]);
    if (out) (*out)[k] = cur;
  }
  return cur;
}

}  // namespace

TimeSeries inductor_current(const TimeSeries& v, double inductance, double r_series) {
  if (!(inductance > 0.0) || !std::isfinite(inductance))
    throw ValidationError("inductor_current: inductance must be positive");
  if (r_series < 0.0 || !std::isfinite(r_series))
    throw ValidationError("inductor_current: r_series must be >= 0");

  const std::size_t n = v.size();

  if (r_series == 0.0) {
    // Zero-mean integral: mean removed from v for periodicity, then from i to
    // pin the undetermined constant.
    TimeSeries raw = integrate(v, /*remove_dc=*/true);
    std::vector<double> out(n);
    kernels::active().scale(1.0 / inductance, raw.data(), out.data(), n);
    TimeSeries unadjusted(v.t0(), v.dt(), std::move(out), "A");
    const double bias = trapezoid_mean(unadjusted);
    std::vector<double> centered(n);
    kernels::active().shift(-bias, unadjusted.data(), centered.data(), n);
    return TimeSeries(v.t0(), v.dt(), std::move(centered), "A");
  }

  // The one-period map i(T) = a*i(0) + b is affine with constant coefficients,
  // so the periodic fixed point is solved from two trial integrations, then
  // verified; plain iteration is the fallback when the map is too stiff.
  const double end0 = advance_period(v, inductance, r_series, 0.0, nullptr);
  const double end1 = advance_period(v, inductance, r_series, 1.0, nullptr);
  const double a = end1 - end0;
  double i0 = (std::fabs(1.0 - a) > 1e-12) ? end0 / (1.0 - a) : 0.0;

  std::vector<double> buf(n);
  const double tol = 1e-9;
  for (int iter = 0; iter < 1000; ++iter) {
    const double end = advance_period(v, inductance, r_series, i0, &buf);
    const auto [lo, hi] = kernels::active().minmax(buf.data(), n);
    const double scale = std::max({std::fabs(lo), std::fabs(hi), 1e-300});
    if (std::fabs(end - i0) <= tol * scale)
      return TimeSeries(v.t0(), v.dt(), std::move(buf), "A");
    i0 = end;  // plain period iteration when the affine solve was not enough
  }
  throw NumericError("inductor_current: periodic steady state did not converge in 1000 periods");
}

}  // namespace coreloss
