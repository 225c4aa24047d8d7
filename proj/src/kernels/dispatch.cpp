#include <cstdlib>
#include <string>

#include "creditworks/errors.hpp"
#include "creditworks/kernels.hpp"

namespace creditworks::kernels {

#if !(defined(__x86_64__) || defined(_M_X64))
const KernelTable* avx2_table() { return nullptr; }
#endif
#if !(defined(__aarch64__) || defined(_M_ARM64))
const KernelTable* neon_table() { return nullptr; }
#endif

namespace {

const KernelTable& choose() {
  if (const char* forced = std::getenv("CREDITWORKS_KERNELS");
      forced != nullptr && *forced != '\0') {
    const std::string name(forced);
    if (name == "scalar") return scalar_table();
    const KernelTable* table = nullptr;
    if (name == "avx2") table = avx2_table();
    if (name == "neon") table = neon_table();
    if (table == nullptr) {
      throw Error("CREDITWORKS_KERNELS=" + name +
                  " is not available on this machine");
    }
    return *table;
  }
  if (const auto* t = avx2_table()) return *t;
  if (const auto* t = neon_table()) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = choose();
  return table;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  return active().dot(a.data(), b.data(), a.size());
}

void affine_rows(std::span<const double> x, std::size_t cols,
                 std::span<const double> w, double bias,
                 std::span<double> out) {
  if (w.size() != cols || out.size() * cols != x.size()) {
    throw DimensionError("affine_rows: shape mismatch");
  }
  active().affine_rows(x.data(), out.size(), cols, w.data(), bias, out.data());
}

void accumulate_transposed(std::span<const double> x, std::size_t cols,
                           std::span<const double> coef,
                           std::span<double> out) {
  if (out.size() != cols || coef.size() * cols != x.size()) {
    throw DimensionError("accumulate_transposed: shape mismatch");
  }
  active().accumulate_transposed(x.data(), coef.size(), cols, coef.data(),
                                 out.data());
}

void shift_scale_rows(std::span<double> x, std::size_t cols,
                      std::span<const double> shift,
                      std::span<const double> scale) {
  if (shift.size() != cols || scale.size() != cols ||
      (cols != 0 && x.size() % cols != 0)) {
    throw DimensionError("shift_scale_rows: shape mismatch");
  }
  const std::size_t rows = cols == 0 ? 0 : x.size() / cols;
  active().shift_scale_rows(x.data(), rows, cols, shift.data(), scale.data());
}

}  // namespace creditworks::kernels
