#include <atomic>
#include <cstdlib>
#include <cstring>

#include "coreloss/kernels.hpp"

namespace coreloss::kernels {

const Ops* avx2_ops();  // null when not compiled in
const Ops* neon_ops();

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() {
  if (const char* env = std::getenv("CORELOSS_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2_ops() && cpu_has_avx2()) return Isa::avx2;
    if (std::strcmp(env, "neon") == 0 && neon_ops()) return Isa::neon;
    // Unknown or unavailable request falls through to detection.
  }
  if (avx2_ops() && cpu_has_avx2()) return Isa::avx2;
  if (neon_ops()) return Isa::neon;
  return Isa::scalar;
}

std::atomic<const Ops*>& active_slot() {
  static std::atomic<const Ops*> slot{ops_for(detect())};
  return slot;
}

}  // namespace

const Ops* ops_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &scalar_ops();
    case Isa::avx2:
      return (avx2_ops() && cpu_has_avx2()) ? avx2_ops() : nullptr;
    case Isa::neon:
      return neon_ops();
  }
  return nullptr;
}

const Ops& active() { return *active_slot().load(std::memory_order_relaxed); }

Isa active_isa() {
  const Ops* ops = &active();
  if (ops == avx2_ops()) return Isa::avx2;
  if (ops == neon_ops()) return Isa::neon;
  return Isa::scalar;
}

bool select(Isa isa) {
  const Ops* ops = ops_for(isa);
  if (!ops) return false;
  active_slot().store(ops, std::memory_order_relaxed);
  return true;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

}  // namespace coreloss::kernels
