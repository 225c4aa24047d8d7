#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense inner loops used by training, scoring and scaling.
//
// Every variant reduces in the same order as the scalar reference: four
// interleaved partial sums (lane k takes elements i with i % 4 == k),
// combined as (s0 + s1) + (s2 + s3), then the tail added left to right.
// Elementwise kernels use plain multiply then add (no FMA). Under these
// rules all variants return bit-identical results, which keeps trained
// models reproducible across machines regardless of which variant the
// dispatcher picks.
namespace creditworks::kernels {

struct KernelTable {
  std::string_view name;

  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);

  // out[r] = bias + dot(x[r, :], w) for a row-major rows x cols matrix.
  void (*affine_rows)(const double* x, std::size_t rows, std::size_t cols,
                      const double* w, double bias, double* out);

  // out[c] += sum_r coef[r] * x[r, c], rows accumulated in order.
  void (*accumulate_transposed)(const double* x, std::size_t rows,
                                std::size_t cols, const double* coef,
                                double* out);

  // x[r, c] = (x[r, c] - shift[c]) * scale[c] in place.
  void (*shift_scale_rows)(double* x, std::size_t rows, std::size_t cols,
                           const double* shift, const double* scale);
};

const KernelTable& scalar_table();
// nullptr when the variant is not compiled in or the CPU lacks support.
const KernelTable* avx2_table();
const KernelTable* neon_table();

// Variant chosen once per process: the best supported one, unless the
// CREDITWORKS_KERNELS environment variable names another ("scalar",
// "avx2", "neon").
const KernelTable& active();

// Convenience wrappers over active().
double dot(std::span<const double> a, std::span<const double> b);
void affine_rows(std::span<const double> x, std::size_t cols,
                 std::span<const double> w, double bias,
                 std::span<double> out);
void accumulate_transposed(std::span<const double> x, std::size_t cols,
                           std::span<const double> coef,
                           std::span<double> out);
void shift_scale_rows(std::span<double> x, std::size_t cols,
                      std::span<const double> shift,
                      std::span<const double> scale);

}  // namespace creditworks::kernels
