#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "creditworks/dataset.hpp"

namespace fixtures {

// Two isotropic unit-variance Gaussian classes in 2-D, centred at (0, 0)
// and (separation, separation); classes alternate row by row.
creditworks::DesignMatrix gaussian_blobs(std::size_t n, double separation,
                                         std::uint64_t seed);

// Points uniform on [-1, 1]^2 labelled (x0 > 0) xor (x1 > 0), each label
// flipped with probability `flip`.
creditworks::DesignMatrix noisy_xor(std::size_t n, double flip, std::uint64_t seed);

// Uniform random matrix with binary labels; values drawn from a small
// integer grid when `levels` > 0 so ties are common.
creditworks::DesignMatrix random_matrix(std::size_t rows, std::size_t cols,
                                        std::uint64_t seed, int levels = 0);

struct LoanBookOptions {
  std::size_t rows = 600;
  std::uint64_t seed = 1;
  bool include_current = true;    // add non-terminal statuses
  bool include_missing = true;    // blank some feature cells
  bool single_class = false;      // every terminal loan Fully Paid
};

// Lending Club-shaped CSV whose default odds rise with int_rate, dti and
// sub-grade letter.
std::string loan_book_csv(const LoanBookOptions& options);

// Repository's shipped column spec for the loan CSV layout above.
std::filesystem::path shipped_column_spec();

}  // namespace fixtures
