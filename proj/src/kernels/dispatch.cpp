#include <cstdlib>
#include <cstring>

#include "dqnd/kernels/kernels.hpp"

namespace dqnd::kernels {

namespace {

bool cpu_has_avx2_fma() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select() {
  const char* force = std::getenv("DIRAC_QND_SIMD");
  if (force && std::strcmp(force, "scalar") == 0) return scalar_table();
  if (const KernelTable* t = avx2_table(); t && cpu_has_avx2_fma()) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& t = select();
  return t;
}

std::string_view active_name() { return active().name; }

}  // namespace dqnd::kernels
