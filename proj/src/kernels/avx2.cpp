#include <immintrin.h>

#include "creditworks/kernels.hpp"

namespace creditworks::kernels {
namespace {

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(
        acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  double sum = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void affine_rows_avx2(const double* x, std::size_t rows, std::size_t cols,
                      const double* w, double bias, double* out) {
  for (std::size_t r = 0; r < rows; ++r) {
    out[r] = dot_avx2(x + r * cols, w, cols) + bias;
  }
}

void accumulate_transposed_avx2(const double* x, std::size_t rows,
                                std::size_t cols, const double* coef,
                                double* out) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double k = coef[r];
    const __m256d vk = _mm256_set1_pd(k);
    const double* row = x + r * cols;
    std::size_t c = 0;
    for (; c + 4 <= cols; c += 4) {
      const __m256d prod = _mm256_mul_pd(vk, _mm256_loadu_pd(row + c));
      _mm256_storeu_pd(out + c, _mm256_add_pd(_mm256_loadu_pd(out + c), prod));
    }
    for (; c < cols; ++c) out[c] += k * row[c];
  }
}

void shift_scale_rows_avx2(double* x, std::size_t rows, std::size_t cols,
                           const double* shift, const double* scale) {
  for (std::size_t r = 0; r < rows; ++r) {
    double* row = x + r * cols;
    std::size_t c = 0;
    for (; c + 4 <= cols; c += 4) {
      const __m256d centered =
          _mm256_sub_pd(_mm256_loadu_pd(row + c), _mm256_loadu_pd(shift + c));
      _mm256_storeu_pd(row + c,
                       _mm256_mul_pd(centered, _mm256_loadu_pd(scale + c)));
    }
    for (; c < cols; ++c) row[c] = (row[c] - shift[c]) * scale[c];
  }
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{"avx2", dot_avx2, affine_rows_avx2,
                                 accumulate_transposed_avx2,
                                 shift_scale_rows_avx2};
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &table : nullptr;
}

}  // namespace creditworks::kernels
