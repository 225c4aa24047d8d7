#include <arm_neon.h>

#include "creditworks/kernels.hpp"

namespace creditworks::kernels {
namespace {

// Two 2-lane accumulators reproduce the scalar reference's four partial
// sums: lo holds lanes 0/1, hi holds lanes 2/3.
double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0);
  float64x2_t hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double sum = (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) +
               (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void affine_rows_neon(const double* x, std::size_t rows, std::size_t cols,
                      const double* w, double bias, double* out) {
  for (std::size_t r = 0; r < rows; ++r) {
    out[r] = dot_neon(x + r * cols, w, cols) + bias;
  }
}

void accumulate_transposed_neon(const double* x, std::size_t rows,
                                std::size_t cols, const double* coef,
                                double* out) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double k = coef[r];
    const float64x2_t vk = vdupq_n_f64(k);
    const double* row = x + r * cols;
    std::size_t c = 0;
    for (; c + 2 <= cols; c += 2) {
      vst1q_f64(out + c, vaddq_f64(vld1q_f64(out + c),
                                   vmulq_f64(vk, vld1q_f64(row + c))));
    }
    for (; c < cols; ++c) out[c] += k * row[c];
  }
}

void shift_scale_rows_neon(double* x, std::size_t rows, std::size_t cols,
                           const double* shift, const double* scale) {
  for (std::size_t r = 0; r < rows; ++r) {
    double* row = x + r * cols;
    std::size_t c = 0;
    for (; c + 2 <= cols; c += 2) {
      const float64x2_t centered =
          vsubq_f64(vld1q_f64(row + c), vld1q_f64(shift + c));
      vst1q_f64(row + c, vmulq_f64(centered, vld1q_f64(scale + c)));
    }
    for (; c < cols; ++c) row[c] = (row[c] - shift[c]) * scale[c];
  }
}

}  // namespace

const KernelTable* neon_table() {
  static const KernelTable table{"neon", dot_neon, affine_rows_neon,
                                 accumulate_transposed_neon,
                                 shift_scale_rows_neon};
  return &table;
}

}  // namespace creditworks::kernels
