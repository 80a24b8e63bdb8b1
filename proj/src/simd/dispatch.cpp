#include <cstdlib>
#include <string>

#include "kgr/core/types.hpp"
#include "kgr/simd/kernels.hpp"

namespace kgr::simd {

namespace {

constexpr KernelTable kScalar{Isa::scalar, &scalar::translation_distance, &scalar::hadamard_norm,
                              &scalar::rotation_distance};
#ifdef KGR_HAVE_AVX2
constexpr KernelTable kAvx2{Isa::avx2, &avx2::translation_distance, &avx2::hadamard_norm,
                            &avx2::rotation_distance};
#endif

const KernelTable& select_best() {
  if (const char* forced = std::getenv("KGR_ISA"); forced && std::string(forced) == "scalar") return kScalar;
#ifdef KGR_HAVE_AVX2
  if (isa_available(Isa::avx2)) return kAvx2;
#endif
  return kScalar;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#ifdef KGR_HAVE_AVX2
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_available(isa)) throw ConfigError("instruction set not available: " + std::string(isa_name(isa)));
#ifdef KGR_HAVE_AVX2
  if (isa == Isa::avx2) return kAvx2;
#endif
  return kScalar;
}

const KernelTable& kernels() {
  static const KernelTable& table = select_best();
  return table;
}

}  // namespace kgr::simd
