#pragma once

#include <cstddef>
#include <string_view>

namespace kgr::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// Distance kernels behind the three scoring functions. Every variant
/// computes the same quantity; only the summation order differs.
///
///   translation_distance: ||h + r - t||
///   hadamard_norm:        ||h * r * t||  (element-wise)
///   rotation_distance:    ||h o r - t|| where h, t hold d real parts then d
///                         imaginary parts and r is given as (cos, sin) of its phases
struct KernelTable {
  Isa isa;
  double (*translation_distance)(const double* h, const double* r, const double* t, std::size_t d);
  double (*hadamard_norm)(const double* h, const double* r, const double* t, std::size_t d);
  double (*rotation_distance)(const double* h, const double* cos_r, const double* sin_r, const double* t,
                              std::size_t d);
};

bool isa_available(Isa isa);

/// The table for a specific instruction set; throws if it is not available.
const KernelTable& kernels_for(Isa isa);

/// Best available table, chosen once at first use. `KGR_ISA=scalar` forces
/// the portable kernels.
const KernelTable& kernels();

namespace scalar {
double translation_distance(const double* h, const double* r, const double* t, std::size_t d);
double hadamard_norm(const double* h, const double* r, const double* t, std::size_t d);
double rotation_distance(const double* h, const double* cos_r, const double* sin_r, const double* t, std::size_t d);
}  // namespace scalar

namespace avx2 {
double translation_distance(const double* h, const double* r, const double* t, std::size_t d);
double hadamard_norm(const double* h, const double* r, const double* t, std::size_t d);
double rotation_distance(const double* h, const double* cos_r, const double* sin_r, const double* t, std::size_t d);
}  // namespace avx2

}  // namespace kgr::simd
