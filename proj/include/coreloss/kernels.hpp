#pragma once

#include <cstddef>
#include <string_view>
#include <utility>

// Data-parallel primitives behind the series math. The scalar implementations
// are the reference semantics; vector variants (AVX2 on x86-64, NEON on
// aarch64) are selected once at startup and must agree with scalar:
//   - elementwise kernels (mul, axpby, scale, shift, central_diff) bit-exactly,
//     so they deliberately avoid FMA contraction;
//   - reductions (sum, dot, minmax) to ~1e-13 relative, since multi-accumulator
//     association order differs.
// Selection is deterministic on a given machine, which keeps repeated runs
// byte-identical. CORELOSS_KERNELS=scalar|avx2|neon overrides detection.

namespace coreloss::kernels {

enum class Isa { scalar, avx2, neon };

struct Ops {
  std::string_view name;
  double (*sum)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  void (*mul)(const double* x, const double* y, double* out, std::size_t n);
  // out = a*x + b*y
  void (*axpby)(double a, const double* x, double b, const double* y, double* out, std::size_t n);
  void (*scale)(double a, const double* x, double* out, std::size_t n);
  void (*shift)(double c, const double* x, double* out, std::size_t n);
  // out[i] = (x[i+1] - x[i-1]) * inv_2dt for i in [1, n-2]; endpoints untouched.
  void (*central_diff)(const double* x, double inv_2dt, double* out, std::size_t n);
  // n >= 1
  std::pair<double, double> (*minmax)(const double* x, std::size_t n);
};

const Ops& scalar_ops();

// Null if the ISA is not compiled in or the CPU lacks it.
const Ops* ops_for(Isa isa);

// Runtime-selected table (detection happens on first use).
const Ops& active();
Isa active_isa();

// Returns false and leaves the selection unchanged if unavailable.
// Not thread-safe against concurrent kernel use; intended for startup/tests.
bool select(Isa isa);

std::string_view isa_name(Isa isa);

// Cumulative trapezoid: out[0] = 0, out[i] = out[i-1] + dt*(x[i-1]+x[i])/2.
// Sequential by nature; shared by every ISA so results never depend on dispatch.
void cumtrapz(const double* x, double dt, double* out, std::size_t n);

}  // namespace coreloss::kernels
