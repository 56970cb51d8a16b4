// AVX2 variants. Elementwise kernels use plain mul/add (no FMA) so results are
// bit-identical to the scalar reference; reductions use FMA and four
// accumulators, so they differ from scalar only by association order.
#if defined(__x86_64__) && defined(__AVX2__)

#include <immintrin.h>

#include "coreloss/kernels.hpp"

namespace coreloss::kernels {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i];
  return acc;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void mul_avx2(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

void axpby_avx2(double a, const double* x, double b, const double* y, double* out,
                std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d ax = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    __m256d by = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(ax, by));
  }
  for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void scale_avx2(double a, const double* x, double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = a * x[i];
}

void shift_avx2(double c, const double* x, double* out, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_add_pd(vc, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = c + x[i];
}

void central_diff_avx2(const double* x, double inv_2dt, double* out, std::size_t n) {
  if (n < 3) return;
  const __m256d vs = _mm256_set1_pd(inv_2dt);
  std::size_t i = 1;
  for (; i + 4 <= n - 1; i += 4) {
    __m256d fwd = _mm256_loadu_pd(x + i + 1);
    __m256d bwd = _mm256_loadu_pd(x + i - 1);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_sub_pd(fwd, bwd), vs));
  }
  for (; i + 1 < n; ++i) out[i] = (x[i + 1] - x[i - 1]) * inv_2dt;
}

std::pair<double, double> minmax_avx2(const double* x, std::size_t n) {
  double lo = x[0];
  double hi = x[0];
  std::size_t i = 0;
  if (n >= 4) {
    __m256d vlo = _mm256_loadu_pd(x);
    __m256d vhi = vlo;
    for (i = 4; i + 4 <= n; i += 4) {
      __m256d v = _mm256_loadu_pd(x + i);
      vlo = _mm256_min_pd(vlo, v);
      vhi = _mm256_max_pd(vhi, v);
    }
    alignas(32) double tmp[4];
    _mm256_store_pd(tmp, vlo);
    lo = tmp[0];
    for (int k = 1; k < 4; ++k)
      if (tmp[k] < lo) lo = tmp[k];
    _mm256_store_pd(tmp, vhi);
    hi = tmp[0];
    for (int k = 1; k < 4; ++k)
      if (tmp[k] > hi) hi = tmp[k];
  }
  for (; i < n; ++i) {
    if (x[i] < lo) lo = x[i];
    if (x[i] > hi) hi = x[i];
  }
  return {lo, hi};
}

}  // namespace

const Ops* avx2_ops() {
  static const Ops ops{
      "avx2",     sum_avx2,   dot_avx2,   mul_avx2,
      axpby_avx2, scale_avx2, shift_avx2, central_diff_avx2,
      minmax_avx2,
  };
  return &ops;
}

}  // namespace coreloss::kernels

#else

#include "coreloss/kernels.hpp"

namespace coreloss::kernels {
const Ops* avx2_ops() { return nullptr; }
}  // namespace coreloss::kernels

#endif
