#include "coreloss/kernels.hpp"

namespace coreloss::kernels {

namespace {

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void mul_scalar(const double* x, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

void axpby_scalar(double a, const double* x, double b, const double* y, double* out,
                  std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void scale_scalar(double a, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i];
}

void shift_scalar(double c, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = c + x[i];
}

void central_diff_scalar(const double* x, double inv_2dt, double* out, std::size_t n) {
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (x[i + 1] - x[i - 1]) * inv_2dt;
}

std::pair<double, double> minmax_scalar(const double* x, std::size_t n) {
  double lo = x[0];
  double hi = x[0];
  for (std::size_t i = 1; i < n; ++i) {
    if (x[i] < lo) lo = x[i];
    if (x[i] > hi) hi = x[i];
  }
  return {lo, hi};
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{
      "scalar",       sum_scalar,   dot_scalar,   mul_scalar,
      axpby_scalar,   scale_scalar, shift_scalar, central_diff_scalar,
      minmax_scalar,
  };
  return ops;
}

void cumtrapz(const double* x, double dt, double* out, std::size_t n) {
  if (n == 0) return;
  out[0] = 0.0;
  const double half_dt = 0.5 * dt;
  for (std::size_t i = 1; i < n; ++i) out[i] = out[i - 1] + half_dt * (x[i - 1] + x[i]);
}

}  // namespace coreloss::kernels
