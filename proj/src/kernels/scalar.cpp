#include "creditworks/kernels.hpp"

namespace creditworks::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  double sum = (s0 + s1) + (s2 + s3);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void affine_rows_scalar(const double* x, std::size_t rows, std::size_t cols,
                        const double* w, double bias, double* out) {
  for (std::size_t r = 0; r < rows; ++r) {
    out[r] = dot_scalar(x + r * cols, w, cols) + bias;
  }
}

void accumulate_transposed_scalar(const double* x, std::size_t rows,
                                  std::size_t cols, const double* coef,
                                  double* out) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double k = coef[r];
    const double* row = x + r * cols;
    for (std::size_t c = 0; c < cols; ++c) out[c] += k * row[c];
  }
}

void shift_scale_rows_scalar(double* x, std::size_t rows, std::size_t cols,
                             const double* shift, const double* scale) {
  for (std::size_t r = 0; r < rows; ++r) {
    double* row = x + r * cols;
    for (std::size_t c = 0; c < cols; ++c) {
      row[c] = (row[c] - shift[c]) * scale[c];
    }
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", dot_scalar, affine_rows_scalar,
                                 accumulate_transposed_scalar,
                                 shift_scale_rows_scalar};
  return table;
}

}  // namespace creditworks::kernels
