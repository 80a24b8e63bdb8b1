#include <cmath>

#include "kgr/simd/kernels.hpp"

namespace kgr::simd::scalar {

double translation_distance(const double* h, const double* r, const double* t, std::size_t d) {
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double v = h[i] + r[i] - t[i];
    acc += v * v;
  }
  return std::sqrt(acc);
}

double hadamard_norm(const double* h, const double* r, const double* t, std::size_t d) {
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double v = h[i] * r[i] * t[i];
    acc += v * v;
  }
  return std::sqrt(acc);
}

double rotation_distance(const double* h, const double* cos_r, const double* sin_r, const double* t, std::size_t d) {
  const double* h_im = h + d;
  const double* t_im = t + d;
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double re = h[i] * cos_r[i] - h_im[i] * sin_r[i] - t[i];
    const double im = h[i] * sin_r[i] + h_im[i] * cos_r[i] - t_im[i];
    acc += re * re + im * im;
  }
  return std::sqrt(acc);
}

}  // namespace kgr::simd::scalar
