#include "phylokit/kernels.hpp"

namespace phylokit::kernels {
namespace {

inline bool is_base(char c) {
  return c == 'A' || c == 'C' || c == 'G' || c == 'T';
}

double sum_scalar(std::span<const double> x) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < x.size(); ++i) lane[i % 4] += x[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void vec_mat_scalar(std::span<const double> a, std::span<const double> m,
                    std::size_t cols, std::span<double> out) {
  for (std::size_t j = 0; j < cols; ++j) out[j] = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ai = a[i];
    const double* row = m.data() + i * cols;
    for (std::size_t j = 0; j < cols; ++j) {
      const double prod = ai * row[j];
      out[j] = out[j] + prod;
    }
  }
}

void hadamard_scalar(std::span<double> out, std::span<const double> w) {
  for (std::size_t j = 0; j < out.size(); ++j) out[j] *= w[j];
}

RowMin q_row_min_scalar(std::span<const double> row, std::span<const double> r,
                        double scale, double r_self, std::size_t begin) {
  RowMin best{0.0, begin};
  bool first = true;
  for (std::size_t j = begin; j < row.size(); ++j) {
    double q = scale * row[j];
    q = q - r_self;
    q = q - r[j];
    if (first || q < best.value) {
      best = {q, j};
      first = false;
    }
  }
  return best;
}

SiteCounts site_counts_scalar(std::string_view a, std::string_view b) {
  SiteCounts out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (is_base(a[i]) && is_base(b[i])) {
      ++out.sites;
      if (a[i] != b[i]) ++out.differences;
    }
  }
  return out;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Backend::kScalar, sum_scalar,       vec_mat_scalar,
                                 hadamard_scalar,  q_row_min_scalar, site_counts_scalar};
  return table;
}

}  // namespace phylokit::kernels
