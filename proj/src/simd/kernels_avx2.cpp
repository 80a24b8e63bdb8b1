// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>

#include "kgr/simd/kernels.hpp"

namespace kgr::simd::avx2 {

namespace {

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

}  // namespace

double translation_distance(const double* h, const double* r, const double* t, std::size_t d) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= d; i += 4) {
    const __m256d v = _mm256_sub_pd(_mm256_add_pd(_mm256_loadu_pd(h + i), _mm256_loadu_pd(r + i)),
                                    _mm256_loadu_pd(t + i));
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double sum = horizontal_sum(acc);
  for (; i < d; ++i) {
    const double v = h[i] + r[i] - t[i];
    sum += v * v;
  }
  return std::sqrt(sum);
}

double hadamard_norm(const double* h, const double* r, const double* t, std::size_t d) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= d; i += 4) {
    const __m256d v = _mm256_mul_pd(_mm256_mul_pd(_mm256_loadu_pd(h + i), _mm256_loadu_pd(r + i)),
                                    _mm256_loadu_pd(t + i));
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double sum = horizontal_sum(acc);
  for (; i < d; ++i) {
    const double v = h[i] * r[i] * t[i];
    sum += v * v;
  }
  return std::sqrt(sum);
}

double rotation_distance(const double* h, const double* cos_r, const double* sin_r, const double* t, std::size_t d) {
  const double* h_im = h + d;
  const double* t_im = t + d;
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= d; i += 4) {
    const __m256d a = _mm256_loadu_pd(h + i);
    const __m256d b = _mm256_loadu_pd(h_im + i);
    const __m256d c = _mm256_loadu_pd(cos_r + i);
    const __m256d s = _mm256_loadu_pd(sin_r + i);
    // re = a*c - b*s - t_re ; im = a*s + b*c - t_im
    const __m256d re = _mm256_sub_pd(_mm256_fmsub_pd(a, c, _mm256_mul_pd(b, s)), _mm256_loadu_pd(t + i));
    const __m256d im = _mm256_sub_pd(_mm256_fmadd_pd(a, s, _mm256_mul_pd(b, c)), _mm256_loadu_pd(t_im + i));
    acc = _mm256_fmadd_pd(re, re, acc);
    acc = _mm256_fmadd_pd(im, im, acc);
  }
  double sum = horizontal_sum(acc);
  for (; i < d; ++i) {
    const double re = h[i] * cos_r[i] - h_im[i] * sin_r[i] - t[i];
    const double im = h[i] * sin_r[i] + h_im[i] * cos_r[i] - t_im[i];
    sum += re * re + im * im;
  }
  return std::sqrt(sum);
}

}  // namespace kgr::simd::avx2
