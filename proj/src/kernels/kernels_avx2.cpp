#include "phylokit/kernels.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define PHYLOKIT_HAVE_AVX2_PATH 1
#include <immintrin.h>
#else
#define PHYLOKIT_HAVE_AVX2_PATH 0
#endif

namespace phylokit::kernels {

#if PHYLOKIT_HAVE_AVX2_PATH
namespace {

#define AVX2_FN __attribute__((target("avx2")))

inline bool is_base(char c) {
  return c == 'A' || c == 'C' || c == 'G' || c == 'T';
}

AVX2_FN double sum_avx2(std::span<const double> x) {
  const std::size_t n = x.size();
  const std::size_t body = n - n % 4;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x.data() + i));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t i = body; i < n; ++i) lane[i % 4] += x[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

AVX2_FN void vec_mat_avx2(std::span<const double> a, std::span<const double> m,
                          std::size_t cols, std::span<double> out) {
  const std::size_t body = cols - cols % 4;
  for (std::size_t j = 0; j < cols; ++j) out[j] = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ai = a[i];
    const double* row = m.data() + i * cols;
    const __m256d va = _mm256_set1_pd(ai);
    for (std::size_t j = 0; j < body; j += 4) {
      const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(row + j));
      _mm256_storeu_pd(out.data() + j,
                       _mm256_add_pd(_mm256_loadu_pd(out.data() + j), prod));
    }
    for (std::size_t j = body; j < cols; ++j) {
      const double prod = ai * row[j];
      out[j] = out[j] + prod;
    }
  }
}

AVX2_FN void hadamard_avx2(std::span<double> out, std::span<const double> w) {
  const std::size_t n = out.size();
  const std::size_t body = n - n % 4;
  for (std::size_t j = 0; j < body; j += 4) {
    _mm256_storeu_pd(out.data() + j, _mm256_mul_pd(_mm256_loadu_pd(out.data() + j),
                                                   _mm256_loadu_pd(w.data() + j)));
  }
  for (std::size_t j = body; j < n; ++j) out[j] *= w[j];
}

AVX2_FN RowMin q_row_min_avx2(std::span<const double> row, std::span<const double> r,
                              double scale, double r_self, std::size_t begin) {
  const std::size_t n = row.size();
  std::size_t j = begin;
  RowMin best{0.0, begin};
  bool have = false;
  if (n - begin >= 4) {
    const __m256d vscale = _mm256_set1_pd(scale);
    const __m256d vself = _mm256_set1_pd(r_self);
    __m256d best_v = _mm256_set1_pd(0.0);
    __m256d best_i = _mm256_set1_pd(0.0);
    __m256d idx = _mm256_setr_pd(double(j), double(j + 1), double(j + 2), double(j + 3));
    const __m256d four = _mm256_set1_pd(4.0);
    {
      __m256d q = _mm256_mul_pd(vscale, _mm256_loadu_pd(row.data() + j));
      q = _mm256_sub_pd(q, vself);
      best_v = _mm256_sub_pd(q, _mm256_loadu_pd(r.data() + j));
      best_i = idx;
      j += 4;
    }
    for (; j + 4 <= n; j += 4) {
      idx = _mm256_add_pd(idx, four);
      __m256d q = _mm256_mul_pd(vscale, _mm256_loadu_pd(row.data() + j));
      q = _mm256_sub_pd(q, vself);
      q = _mm256_sub_pd(q, _mm256_loadu_pd(r.data() + j));
      const __m256d lt = _mm256_cmp_pd(q, best_v, _CMP_LT_OQ);
      best_v = _mm256_blendv_pd(best_v, q, lt);
      best_i = _mm256_blendv_pd(best_i, idx, lt);
    }
    alignas(32) double vals[4];
    alignas(32) double inds[4];
    _mm256_store_pd(vals, best_v);
    _mm256_store_pd(inds, best_i);
    best = {vals[0], static_cast<std::size_t>(inds[0])};
    for (int l = 1; l < 4; ++l) {
      const auto li = static_cast<std::size_t>(inds[l]);
      if (vals[l] < best.value || (vals[l] == best.value && li < best.index)) {
        best = {vals[l], li};
      }
    }
    have = true;
  }
  for (; j < n; ++j) {
    double q = scale * row[j];
    q = q - r_self;
    q = q - r[j];
    if (!have || q < best.value) {
      best = {q, j};
      have = true;
    }
  }
  return best;
}

AVX2_FN SiteCounts site_counts_avx2(std::string_view a, std::string_view b) {
  const std::size_t n = a.size();
  const std::size_t body = n - n % 32;
  const __m256i cA = _mm256_set1_epi8('A');
  const __m256i cC = _mm256_set1_epi8('C');
  const __m256i cG = _mm256_set1_epi8('G');
  const __m256i cT = _mm256_set1_epi8('T');
  SiteCounts out;
  for (std::size_t i = 0; i < body; i += 32) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + i));
    const __m256i ok_a = _mm256_or_si256(
        _mm256_or_si256(_mm256_cmpeq_epi8(va, cA), _mm256_cmpeq_epi8(va, cC)),
        _mm256_or_si256(_mm256_cmpeq_epi8(va, cG), _mm256_cmpeq_epi8(va, cT)));
    const __m256i ok_b = _mm256_or_si256(
        _mm256_or_si256(_mm256_cmpeq_epi8(vb, cA), _mm256_cmpeq_epi8(vb, cC)),
        _mm256_or_si256(_mm256_cmpeq_epi8(vb, cG), _mm256_cmpeq_epi8(vb, cT)));
    const __m256i both = _mm256_and_si256(ok_a, ok_b);
    const __m256i diff = _mm256_andnot_si256(_mm256_cmpeq_epi8(va, vb), both);
    const auto both_mask = static_cast<std::uint32_t>(_mm256_movemask_epi8(both));
    const auto diff_mask = static_cast<std::uint32_t>(_mm256_movemask_epi8(diff));
    out.sites += __builtin_popcount(both_mask);
    out.differences += __builtin_popcount(diff_mask);
  }
  for (std::size_t i = body; i < n; ++i) {
    if (is_base(a[i]) && is_base(b[i])) {
      ++out.sites;
      if (a[i] != b[i]) ++out.differences;
    }
  }
  return out;
}

#undef AVX2_FN

}  // namespace

const KernelTable* avx2_kernels() {
  static const bool supported = __builtin_cpu_supports("avx2");
  static const KernelTable table{Backend::kAvx2, sum_avx2,       vec_mat_avx2,
                                 hadamard_avx2,  q_row_min_avx2, site_counts_avx2};
  return supported ? &table : nullptr;
}

#else

const KernelTable* avx2_kernels() { return nullptr; }

#endif

}  // namespace phylokit::kernels
