#include "coreloss/timeseries.hpp"

#include <cmath>
#include <cstdint>
#include <utility>

#include "coreloss/kernels.hpp"

namespace coreloss {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool close_rel(double a, double b, double rel) {
  double scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= rel * std::max(scale, 1e-300);
}

std::string unit_integrated(const std::string& u) {
  if (u.empty()) return u;
  if (u.size() > 2 && u.compare(u.size() - 2, 2, "/s") == 0) return u.substr(0, u.size() - 2);
  return u + "*s";
}

std::string unit_differentiated(const std::string& u) {
  if (u.empty()) return u;
  if (u.size() > 2 && u.compare(u.size() - 2, 2, "*s") == 0) return u.substr(0, u.size() - 2);
  return u + "/s";
}

std::string unit_product(const std::string& a, const std::string& b) {
  if ((a == "V" && b == "A") || (a == "A" && b == "V")) return "W";
  if (a.empty()) return b;
  if (b.empty()) return a;
  return a + "*" + b;
}

}  // namespace

TimeSeries::TimeSeries(double t0, double dt, std::vector<double> values, std::string unit)
    : t0_(t0), dt_(dt), unit_(std::move(unit)), values_(std::move(values)) {
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw ValidationError("TimeSeries: dt must be positive and finite");
  if (!std::isfinite(t0_)) throw ValidationError("TimeSeries: t0 must be finite");
  if (values_.size() < 2) throw ValidationError("TimeSeries: needs at least 2 samples");
  for (double v : values_)
    if (!std::isfinite(v)) throw ValidationError("TimeSeries: all samples must be finite");
}

void require_aligned(const TimeSeries& a, const TimeSeries& b, const char* what) {
  if (a.size() != b.size())
    throw ValidationError(std::string(what) + ": series lengths differ");
  if (!close_rel(a.dt(), b.dt(), 1e-9))
    throw ValidationError(std::string(what) + ": series sample intervals differ");
  if (std::fabs(a.t0() - b.t0()) > 1e-9 * std::max(a.dt(), std::fabs(a.t0())))
    throw ValidationError(std::string(what) + ": series start times differ");
}

TimeSeries integrate(const TimeSeries& x, bool remove_dc) {
  const std::size_t n = x.size();
  std::vector<double> src;
  const double* p = x.data();
  if (remove_dc) {
    src.resize(n);
    kernels::active().shift(-trapezoid_mean(x), x.data(), src.data(), n);
    p = src.data();
  }
  std::vector<double> out(n);
  kernels::cumtrapz(p, x.dt(), out.data(), n);
  return TimeSeries(x.t0(), x.dt(), std::move(out), unit_integrated(x.unit()));
}

TimeSeries differentiate(const TimeSeries& x) {
  const std::size_t n = x.size();
  if (n < 3) throw ValidationError("differentiate: needs at least 3 samples");
  const double inv_2dt = 1.0 / (2.0 * x.dt());
  std::vector<double> out(n);
  kernels::active().central_diff(x.data(), inv_2dt, out.data(), n);
  const auto& v = x.values();
  out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) * inv_2dt;
  out[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) * inv_2dt;
  return TimeSeries(x.t0(), x.dt(), std::move(out), unit_differentiated(x.unit()));
}

namespace {

// Number of samples in one periodic extent: n-1 if the series carries the wrap
// sample, n if it does not. Throws when neither interpretation holds.
std::size_t periodic_extent(const TimeSeries& x, double f0, std::uint64_t* k_out) {
  if (!(f0 > 0.0) || !std::isfinite(f0)) throw ValidationError("fft_fundamental: f0 must be positive");
  const double dt = x.dt();
  const double half_sample = 0.5 * f0 * dt;  // tolerance on the period count
  for (std::size_t m : {x.size() - 1, x.size()}) {
    const double periods = f0 * dt * static_cast<double>(m);
    const double k = std::round(periods);
    if (k >= 1.0 && std::fabs(periods - k) <= half_sample) {
      if (k_out) *k_out = static_cast<std::uint64_t>(k);
      if (2.0 * k > static_cast<double>(m))
        throw ValidationError("fft_fundamental: f0 above the Nyquist limit of the series");
      return m;
    }
  }
  throw SpectralLeakageError(
      "fft_fundamental: span is not an integer number of periods of the requested frequency");
}

}  // namespace

Tone fft_fundamental(const TimeSeries& x, double f0) {
  std::uint64_t k = 0;
  const std::size_t m = periodic_extent(x, f0, &k);
  // Bin angles from exact integer phase (k*j mod m) to keep the correlation coherent.
  std::vector<double> c(m), s(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::uint64_t r = (k * static_cast<std::uint64_t>(j)) % m;
    const double theta = kTwoPi * static_cast<double>(r) / static_cast<double>(m);
    c[j] = std::cos(theta);
    s[j] = std::sin(theta);
  }
  const auto& ops = kernels::active();
  const double re = ops.dot(x.data(), c.data(), m);
  const double im = -ops.dot(x.data(), s.data(), m);
  const double scale = 2.0 / static_cast<double>(m);
  Tone tone;
  tone.amplitude = scale * std::hypot(re, im);
  tone.phase = (tone.amplitude > 0.0) ? std::atan2(im, re) : 0.0;
  tone.frequency = f0;
  return tone;
}

double mean_power(const TimeSeries& v, const TimeSeries& i) {
  require_aligned(v, i, "mean_power");
  TimeSeries p = multiply(v, i);
  return trapezoid(p) / p.span();
}

Spectrum analyze(const TimeSeries& x, std::size_t n_bins) {
  const std::size_t m = x.size() - 1;  // wrap sample dropped
  if (m < 2) throw ValidationError("analyze: series too short");
  if (n_bins == 0 || n_bins > m / 2 + 1)
    throw ValidationError("analyze: bin count exceeds series resolution");
  Spectrum out;
  out.f0_bin = 1.0 / (x.dt() * static_cast<double>(m));
  out.bins.resize(n_bins);
  const auto& ops = kernels::active();
  std::vector<double> c(m), s(m);
  for (std::size_t k = 0; k < n_bins; ++k) {
    for (std::size_t j = 0; j < m; ++j) {
      const std::uint64_t r = (static_cast<std::uint64_t>(k) * j) % m;
      const double theta = kTwoPi * static_cast<double>(r) / static_cast<double>(m);
      c[j] = std::cos(theta);
      s[j] = std::sin(theta);
    }
    const double re = ops.dot(x.data(), c.data(), m);
    const double im = -ops.dot(x.data(), s.data(), m);
    const double scale = (k == 0) ? 1.0 / static_cast<double>(m) : 2.0 / static_cast<double>(m);
    out.bins[k] = {scale * re, scale * im};
  }
  return out;
}

TimeSeries synthesize(const Spectrum& s, double t0, std::size_t n, std::string unit) {
  if (n < 2) throw ValidationError("synthesize: needs at least 2 samples");
  if (s.bins.empty() || !(s.f0_bin > 0.0)) throw ValidationError("synthesize: empty spectrum");
  const std::size_t m = n - 1;
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < s.bins.size(); ++k) {
    const double amp = std::abs(s.bins[k]);
    const double ph = (k == 0) ? 0.0 : std::arg(s.bins[k]);
    if (k == 0) {
      for (std::size_t j = 0; j < n; ++j) out[j] += s.bins[0].real();
      continue;
    }
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint64_t r = (static_cast<std::uint64_t>(k) * j) % m;
      out[j] += amp * std::cos(kTwoPi * static_cast<double>(r) / static_cast<double>(m) + ph);
    }
  }
  const double dt = 1.0 / (s.f0_bin * static_cast<double>(m));
  return TimeSeries(t0, dt, std::move(out), std::move(unit));
}

TimeSeries multiply(const TimeSeries& a, const TimeSeries& b) {
  require_aligned(a, b, "multiply");
  std::vector<double> out(a.size());
  kernels::active().mul(a.data(), b.data(), out.data(), a.size());
  return TimeSeries(a.t0(), a.dt(), std::move(out), unit_product(a.unit(), b.unit()));
}

TimeSeries lin_comb(double ca, const TimeSeries& a, double cb, const TimeSeries& b,
                    std::string unit) {
  require_aligned(a, b, "lin_comb");
  std::vector<double> out(a.size());
  kernels::active().axpby(ca, a.data(), cb, b.data(), out.data(), a.size());
  return TimeSeries(a.t0(), a.dt(), std::move(out), std::move(unit));
}

TimeSeries scaled(const TimeSeries& a, double c, std::string unit) {
  std::vector<double> out(a.size());
  kernels::active().scale(c, a.data(), out.data(), a.size());
  return TimeSeries(a.t0(), a.dt(), std::move(out), std::move(unit));
}

double trapezoid(const TimeSeries& x) {
  const double s = kernels::active().sum(x.data(), x.size());
  return x.dt() * (s - 0.5 * (x[0] + x[x.size() - 1]));
}

double trapezoid_mean(const TimeSeries& x) { return trapezoid(x) / x.span(); }

std::pair<double, double> min_max(const TimeSeries& x) {
  return kernels::active().minmax(x.data(), x.size());
}

}  // namespace coreloss
