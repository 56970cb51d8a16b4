#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>
#include <vector>

#include "coreloss/kernels.hpp"
#include "doctest.h"

using namespace coreloss;

namespace {

std::vector<double> noisy(std::size_t n, unsigned seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> out(n);
  for (auto& v : out) v = scale * u(rng);
  return out;
}

bool bit_equal(double a, double b) {
  std::uint64_t ua, ub;
  std::memcpy(&ua, &a, 8);
  std::memcpy(&ub, &b, 8);
  return ua == ub;
}

// Sizes straddling the vector width and remainder-loop boundaries.
const std::vector<std::size_t> kSizes = {1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 100, 1023};

}  // namespace

TEST_CASE("scalar ops are always available and named") {
  const auto& s = kernels::scalar_ops();
  CHECK(s.name == "scalar");
  CHECK(kernels::ops_for(kernels::Isa::scalar) == &s);
  CHECK(kernels::isa_name(kernels::Isa::scalar) == "scalar");
  CHECK(kernels::isa_name(kernels::Isa::avx2) == "avx2");
  CHECK(kernels::isa_name(kernels::Isa::neon) == "neon");
}

TEST_CASE("scalar sum and dot match straightforward accumulation") {
  const auto& s = kernels::scalar_ops();
  for (auto n : kSizes) {
    auto x = noisy(n, 11 + static_cast<unsigned>(n));
    auto y = noisy(n, 29 + static_cast<unsigned>(n));
    double want_sum = 0.0, want_dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      want_sum += x[i];
      want_dot += x[i] * y[i];
    }
    CHECK(s.sum(x.data(), n) == doctest::Approx(want_sum).epsilon(1e-13));
    CHECK(s.dot(x.data(), y.data(), n) == doctest::Approx(want_dot).epsilon(1e-13));
  }
}

TEST_CASE("scalar minmax agrees with std::minmax_element") {
  const auto& s = kernels::scalar_ops();
  for (auto n : kSizes) {
    auto x = noisy(n, 3 * static_cast<unsigned>(n) + 1);
    auto [lo, hi] = s.minmax(x.data(), n);
    CHECK(lo == *std::min_element(x.begin(), x.end()));
    CHECK(hi == *std::max_element(x.begin(), x.end()));
  }
}

TEST_CASE("elementwise kernels match hand evaluation bit-exactly") {
  const auto& s = kernels::scalar_ops();
  const std::size_t n = 257;
  auto x = noisy(n, 5), y = noisy(n, 6);
  std::vector<double> out(n);

  s.mul(x.data(), y.data(), out.data(), n);
  for (std::size_t i = 0; i < n; ++i) CHECK(bit_equal(out[i], x[i] * y[i]));

  s.axpby(2.5, x.data(), -0.75, y.data(), out.data(), n);
  for (std::size_t i = 0; i < n; ++i) CHECK(bit_equal(out[i], 2.5 * x[i] + -0.75 * y[i]));

  s.scale(3.0, x.data(), out.data(), n);
  for (std::size_t i = 0; i < n; ++i) CHECK(bit_equal(out[i], 3.0 * x[i]));

  s.shift(-1.5, x.data(), out.data(), n);
  for (std::size_t i = 0; i < n; ++i) CHECK(bit_equal(out[i], x[i] - 1.5));
}

TEST_CASE("central_diff fills interior and leaves endpoints untouched") {
  const auto& s = kernels::scalar_ops();
  const std::size_t n = 64;
  auto x = noisy(n, 77);
  std::vector<double> out(n, 123.0);
  const double inv_2dt = 0.5 / 0.01;
  s.central_diff(x.data(), inv_2dt, out.data(), n);
  CHECK(out[0] == 123.0);
  CHECK(out[n - 1] == 123.0);
  for (std::size_t i = 1; i + 1 < n; ++i)
    CHECK(bit_equal(out[i], (x[i + 1] - x[i - 1]) * inv_2dt));
}

TEST_CASE("every compiled ISA agrees with scalar") {
  for (auto isa : {kernels::Isa::avx2, kernels::Isa::neon}) {
    const auto* v = kernels::ops_for(isa);
    if (!v) continue;  // not compiled in or CPU lacks it
    INFO("isa ", v->name);
    const auto& s = kernels::scalar_ops();
    for (auto n : kSizes) {
      auto x = noisy(n, 100 + static_cast<unsigned>(n), 3.0);
      auto y = noisy(n, 200 + static_cast<unsigned>(n), 0.3);
      std::vector<double> a(n), b(n);

      // Elementwise: bit-exact, no FMA contraction allowed.
      s.mul(x.data(), y.data(), a.data(), n);
      v->mul(x.data(), y.data(), b.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(bit_equal(a[i], b[i]));

      s.axpby(1.25, x.data(), -2.0, y.data(), a.data(), n);
      v->axpby(1.25, x.data(), -2.0, y.data(), b.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(bit_equal(a[i], b[i]));

      s.scale(0.1, x.data(), a.data(), n);
      v->scale(0.1, x.data(), b.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(bit_equal(a[i], b[i]));

      s.shift(4.0, x.data(), a.data(), n);
      v->shift(4.0, x.data(), b.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(bit_equal(a[i], b[i]));

      std::fill(a.begin(), a.end(), -7.0);
      std::fill(b.begin(), b.end(), -7.0);
      s.central_diff(x.data(), 50.0, a.data(), n);
      v->central_diff(x.data(), 50.0, b.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(bit_equal(a[i], b[i]));

      // Reductions: accumulator association differs, so relative tolerance.
      CHECK(v->sum(x.data(), n) == doctest::Approx(s.sum(x.data(), n)).epsilon(1e-13));
      CHECK(v->dot(x.data(), y.data(), n) ==
            doctest::Approx(s.dot(x.data(), y.data(), n)).epsilon(1e-13));

      auto [slo, shi] = s.minmax(x.data(), n);
      auto [vlo, vhi] = v->minmax(x.data(), n);
      CHECK(bit_equal(slo, vlo));
      CHECK(bit_equal(shi, vhi));
    }
  }
}

TEST_CASE("select switches the active table and rejects missing ISAs") {
  const auto before = kernels::active_isa();
  CHECK(kernels::select(kernels::Isa::scalar));
  CHECK(kernels::active_isa() == kernels::Isa::scalar);
  CHECK(kernels::active().name == "scalar");

  if (kernels::ops_for(kernels::Isa::avx2)) {
    CHECK(kernels::select(kernels::Isa::avx2));
    CHECK(kernels::active_isa() == kernels::Isa::avx2);
  } else {
    CHECK_FALSE(kernels::select(kernels::Isa::avx2));
    CHECK(kernels::active_isa() == kernels::Isa::scalar);
  }
  if (!kernels::ops_for(kernels::Isa::neon)) {
    const auto held = kernels::active_isa();
    CHECK_FALSE(kernels::select(kernels::Isa::neon));
    CHECK(kernels::active_isa() == held);
  }
  kernels::select(before);
}

TEST_CASE("cumtrapz matches a running trapezoid sum") {
  for (auto n : kSizes) {
    auto x = noisy(n, 900 + static_cast<unsigned>(n));
    std::vector<double> out(n);
    kernels::cumtrapz(x.data(), 0.125, out.data(), n);
    CHECK(out[0] == 0.0);
    double acc = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      acc += 0.125 * (x[i - 1] + x[i]) / 2.0;
      CHECK(bit_equal(out[i], acc));
    }
  }
}

TEST_CASE("cumtrapz of a constant is an exact ramp on power-of-two steps") {
  const std::size_t n = 33;
  std::vector<double> x(n, 2.0), out(n);
  kernels::cumtrapz(x.data(), 0.25, out.data(), n);
  for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == 0.5 * static_cast<double>(i));
}
