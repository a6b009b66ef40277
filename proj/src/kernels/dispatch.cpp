#include <cstdlib>
#include <cstring>

#include "baglab/kernels/kernels.hpp"
#include "variants.hpp"

namespace baglab::kernels {
namespace {

bool cpu_has_avx2_fma() {
#if (defined(__x86_64__) || defined(__i386__)) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

bool force_scalar() {
  const char* v = std::getenv("BAGLAB_FORCE_SCALAR");
  return v != nullptr && *v != '\0' && std::strcmp(v, "0") != 0;
}

const KernelTable& select() {
  if (force_scalar()) return scalar_table();
  if (const KernelTable* t = avx2_table()) return *t;
  if (const KernelTable* t = neon_table()) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable* table = cpu_has_avx2_fma() ? compiled_avx2_table() : nullptr;
  return table;
}

// Advanced SIMD is mandatory on AArch64, so being compiled in is enough.
const KernelTable* neon_table() { return compiled_neon_table(); }

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

}  // namespace baglab::kernels
