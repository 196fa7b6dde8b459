#pragma once

// Codon independence model: the first two codon positions are jointly
// distributed (alpha, 16 states) and independent of the third (beta, 4
// states), so p_IJK = alpha_IJ * beta_K.

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace phylokit {

// Index of codon IJK in the 64-entry tables: 16*I + 4*J + K.
constexpr int codon_index(int i, int j, int k) { return 16 * i + 4 * j + k; }

struct CodonCounts {
  std::array<std::int64_t, 64> counts{};
  std::int64_t total = 0;

  std::int64_t at(int i, int j, int k) const { return counts[codon_index(i, j, k)]; }
};

struct IndependenceParams {
  std::array<double, 16> alpha{};  // indexed 4*I + J
  std::array<double, 4> beta{};

  double prob(int i, int j, int k) const { return alpha[4 * i + j] * beta[k]; }
};

struct IndependenceTest {
  double g2 = 0;
  double chi2 = 0;
  int df = 45;  // 63 free cells minus 15 + 3 free parameters
};

struct SegreDiagnostics {
  double max_minor = 0;  // largest |2x2 minor| of the 16x4 flattening
  std::array<double, 4> singular_values{};  // descending
  double sigma2() const { return singular_values[1]; }
};

// Non-overlapping triplets read left to right. Throws on a length not
// divisible by 3 or a character outside ACGT (case-insensitive).
CodonCounts codon_counts_from_sequence(std::string_view dna);

// Closed-form maximum-likelihood estimate (marginal frequencies).
IndependenceParams independence_mle(const CodonCounts& u);

// G² and χ² goodness of fit against the MLE. Zero cells contribute 0 to G².
IndependenceTest independence_test(const CodonCounts& u);

// Distance diagnostics of a probability table from the rank-one model.
// Singular values come from one-sided Jacobi rotations driven by the 4x4
// Gram matrix of the flattening, applied to the columns directly.
SegreDiagnostics segre_residual(std::span<const double, 64> p);

// u / m as a probability table.
std::array<double, 64> empirical_distribution(const CodonCounts& u);

}  // namespace phylokit
