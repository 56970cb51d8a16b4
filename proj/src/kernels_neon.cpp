// NEON variants (aarch64). Same contract as the AVX2 file: elementwise kernels
// avoid fused contraction so they match scalar bit-for-bit, reductions use two
// accumulators and may differ by association order only.
#if defined(__aarch64__)

#include <arm_neon.h>

#include "coreloss/kernels.hpp"

namespace coreloss::kernels {

namespace {

double sum_neon(const double* x, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vld1q_f64(x + i));
    acc1 = vaddq_f64(acc1, vld1q_f64(x + i + 2));
  }
  for (; i + 2 <= n; i += 2) acc0 = vaddq_f64(acc0, vld1q_f64(x + i));
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += x[i];
  return acc;
}

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  for (; i + 2 <= n; i += 2) acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void mul_neon(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(out + i, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

void axpby_neon(double a, const double* x, double b, const double* y, double* out,
                std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  const float64x2_t vb = vdupq_n_f64(b);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t ax = vmulq_f64(va, vld1q_f64(x + i));
    float64x2_t by = vmulq_f64(vb, vld1q_f64(y + i));
    vst1q_f64(out + i, vaddq_f64(ax, by));
  }
  for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void scale_neon(double a, const double* x, double* out, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(va, vld1q_f64(x + i)));
  for (; i < n; ++i) out[i] = a * x[i];
}

void shift_neon(double c, const double* x, double* out, std::size_t n) {
  const float64x2_t vc = vdupq_n_f64(c);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vaddq_f64(vc, vld1q_f64(x + i)));
  for (; i < n; ++i) out[i] = c + x[i];
}

void central_diff_neon(const double* x, double inv_2dt, double* out, std::size_t n) {
  if (n < 3) return;
  const float64x2_t vs = vdupq_n_f64(inv_2dt);
  std::size_t i = 1;
  for (; i + 2 <= n - 1; i += 2) {
    float64x2_t fwd = vld1q_f64(x + i + 1);
    float64x2_t bwd = vld1q_f64(x + i - 1);
    vst1q_f64(out + i, vmulq_f64(vsubq_f64(fwd, bwd), vs));
  }
  for (; i + 1 < n; ++i) out[i] = (x[i + 1] - x[i - 1]) * inv_2dt;
}

std::pair<double, double> minmax_neon(const double* x, std::size_t n) {
  double lo = x[0];
  double hi = x[0];
  std::size_t i = 0;
  if (n >= 2) {
    float64x2_t vlo = vld1q_f64(x);
    float64x2_t vhi = vlo;
    for (i = 2; i + 2 <= n; i += 2) {
      float64x2_t v = vld1q_f64(x + i);
      vlo = vminq_f64(vlo, v);
      vhi = vmaxq_f64(vhi, v);
    }
    lo = vminvq_f64(vlo);
    hi = vmaxvq_f64(vhi);
  }
  for (; i < n; ++i) {
    if (x[i] < lo) lo = x[i];
    if (x[i] > hi) hi = x[i];
  }
  return {lo, hi};
}

}  // namespace

const Ops* neon_ops() {
  static const Ops ops{
      "neon",     sum_neon,   dot_neon,   mul_neon,
      axpby_neon, scale_neon, shift_neon, central_diff_neon,
      minmax_neon,
  };
  return &ops;
}

}  // namespace coreloss::kernels

#else

#include "coreloss/kernels.hpp"

namespace coreloss::kernels {
const Ops* neon_ops() { return nullptr; }
}  // namespace coreloss::kernels

#endif
