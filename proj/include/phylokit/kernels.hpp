#pragma once

// Data-parallel inner loops shared by the DP and tree-building code.
//
// Every kernel has a portable scalar reference and, on x86-64, an AVX2
// variant. The variant is chosen once at runtime from CPUID. Both variants
// use the same operation order (4 interleaved accumulators, no fused
// multiply-add), so results are bit-identical across backends.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace phylokit::kernels {

enum class Backend { kScalar, kAvx2 };

struct SiteCounts {
  std::int64_t sites = 0;        // columns where both characters are in ACGT
  std::int64_t differences = 0;  // of those, columns with differing bases
};

struct RowMin {
  double value;
  std::size_t index;  // first index attaining value
};

// Table of entry points for one backend.
struct KernelTable {
  Backend backend;
  // Sum of x, accumulated in 4 lanes striped by index mod 4 and reduced as
  // (l0 + l1) + (l2 + l3).
  double (*sum)(std::span<const double> x);
  // out[j] = sum_i a[i] * m[i * cols + j], rows accumulated in order.
  void (*vec_mat)(std::span<const double> a, std::span<const double> m,
                  std::size_t cols, std::span<double> out);
  // out[j] *= w[j]
  void (*hadamard)(std::span<double> out, std::span<const double> w);
  // Minimum over j in [begin, row.size()) of scale * row[j] - r_self - r[j]
  // (evaluated in exactly that order). Requires begin < row.size().
  RowMin (*q_row_min)(std::span<const double> row, std::span<const double> r,
                      double scale, double r_self, std::size_t begin);
  // Pairwise site comparison of two equal-length aligned sequences.
  SiteCounts (*site_counts)(std::string_view a, std::string_view b);
};

const KernelTable& scalar_kernels();
// Null when the build or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

// The table selected for this process (AVX2 when available, overridable by
// force_backend for testing).
const KernelTable& active();
void force_backend(Backend backend);
Backend detected_backend();
const char* backend_name(Backend backend);

}  // namespace phylokit::kernels
