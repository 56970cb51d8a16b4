#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "coreloss/errors.hpp"

namespace coreloss {

// Uniformly sampled series: samples at t0 + i*dt, i in [0, size).
// Immutable after construction; operations return new series.
//
// Convention used throughout: a series representing integer periods of a
// periodic signal carries the wrap sample (last sample duplicates the period
// start), so plain trapezoid sums over the span are exact period integrals.
// The synthesis routines follow this; ingested data may not, and the few
// operations that care (fft_fundamental) accept either form.
class TimeSeries {
 public:
  TimeSeries(double t0, double dt, std::vector<double> values, std::string unit = "");

  double t0() const { return t0_; }
  double dt() const { return dt_; }
  std::size_t size() const { return values_.size(); }
  double span() const { return dt_ * static_cast<double>(values_.size() - 1); }
  double time_at(std::size_t i) const { return t0_ + dt_ * static_cast<double>(i); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  const double* data() const { return values_.data(); }
  const std::string& unit() const { return unit_; }

 private:
  double t0_;
  double dt_;
  std::string unit_;
  std::vector<double> values_;
};

// Harmonic content of one period. bins[k] is the complex peak amplitude of
// frequency k*f0_bin with cosine phase reference at the series start:
// x(t) ~ Re(bins[0]) + sum_k |bins[k]|*cos(2*pi*k*f0_bin*(t-t0) + arg(bins[k])).
struct Spectrum {
  double f0_bin = 0.0;
  std::vector<std::complex<double>> bins;
};

struct Tone {
  double amplitude = 0.0;  // peak
  double phase = 0.0;      // cosine reference at series start, radians
  double frequency = 0.0;
};

// Cumulative trapezoid. remove_dc subtracts the trapezoid mean of x first so
// the result of integrating a full-span periodic signal returns to zero.
// Unit tag: "V" -> "V*s" (a trailing "/s" is stripped instead).
TimeSeries integrate(const TimeSeries& x, bool remove_dc);

// Central differences inside, second-order one-sided stencils at the ends.
// Requires at least 3 samples. Unit tag: "V" -> "V/s" ("*s" suffix stripped).
TimeSeries differentiate(const TimeSeries& x);

// Amplitude and phase of the f0 component via a coherent single-bin DFT.
// The span must hold an integer number of periods of f0 within half a sample,
// with or without the wrap sample; otherwise throws SpectralLeakageError.
Tone fft_fundamental(const TimeSeries& x, double f0);

// (1/T) * trapezoid(v*i) over the shared span. Series must share t0, dt, size.
double mean_power(const TimeSeries& v, const TimeSeries& i);

// Coherent DFT of one full period (wrap sample required), bins 0..n_bins-1.
Spectrum analyze(const TimeSeries& x, std::size_t n_bins);

// Inverse of analyze onto n samples spanning one closed period.
TimeSeries synthesize(const Spectrum& s, double t0, std::size_t n, std::string unit = "");

// Series helpers used across modules; all validate shape compatibility.
TimeSeries multiply(const TimeSeries& a, const TimeSeries& b);
TimeSeries lin_comb(double ca, const TimeSeries& a, double cb, const TimeSeries& b,
                    std::string unit);
TimeSeries scaled(const TimeSeries& a, double c, std::string unit);

double trapezoid(const TimeSeries& x);       // integral over the span
double trapezoid_mean(const TimeSeries& x);  // integral / span
std::pair<double, double> min_max(const TimeSeries& x);

// Throws ValidationError unless a and b share t0, dt (1e-9 relative) and size.
void require_aligned(const TimeSeries& a, const TimeSeries& b, const char* what);

}  // namespace coreloss
