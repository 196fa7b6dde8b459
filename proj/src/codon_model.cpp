#include "phylokit/codon_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "phylokit/error.hpp"
#include "phylokit/nucleotide.hpp"

namespace phylokit {

CodonCounts codon_counts_from_sequence(std::string_view dna) {
  if (dna.size() % 3 != 0) {
    throw Error("codon sequence length " + std::to_string(dna.size()) +
                " is not divisible by 3");
  }
  CodonCounts u;
  for (std::size_t pos = 0; pos < dna.size(); pos += 3) {
    int idx[3];
    for (int c = 0; c < 3; ++c) {
      idx[c] = nucleotide_index(dna[pos + c]);
      if (idx[c] < 0) {
        throw Error("invalid nucleotide '" + std::string(1, dna[pos + c]) + "' at position " +
                    std::to_string(pos + c));
      }
    }
    ++u.counts[codon_index(idx[0], idx[1], idx[2])];
    ++u.total;
  }
  return u;
}

static void require_data(const CodonCounts& u) {
  if (u.total < 1) throw Error("codon table is empty (m = 0)");
}

IndependenceParams independence_mle(const CodonCounts& u) {
  require_data(u);
  IndependenceParams out;
  std::array<std::int64_t, 16> pair{};
  std::array<std::int64_t, 4> third{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        pair[4 * i + j] += u.at(i, j, k);
        third[k] += u.at(i, j, k);
      }
  const double m = static_cast<double>(u.total);
  for (int ij = 0; ij < 16; ++ij) out.alpha[ij] = static_cast<double>(pair[ij]) / m;
  for (int k = 0; k < 4; ++k) out.beta[k] = static_cast<double>(third[k]) / m;
  return out;
}

IndependenceTest independence_test(const CodonCounts& u) {
  require_data(u);
  std::array<std::int64_t, 16> pair{};
  std::array<std::int64_t, 4> third{};
  for (int c = 0; c < 64; ++c) {
    pair[c / 4] += u.counts[c];
    third[c % 4] += u.counts[c];
  }
  // Cell terms are formed from the integers obs * m and pair * third so that
  // exact model points give exactly zero.
  const double m = static_cast<double>(u.total);
  IndependenceTest t;
  for (int c = 0; c < 64; ++c) {
    const double obs_m = static_cast<double>(u.counts[c]) * m;
    const double marg = static_cast<double>(pair[c / 4]) * static_cast<double>(third[c % 4]);
    if (u.counts[c] > 0) t.g2 += static_cast<double>(u.counts[c]) * std::log(obs_m / marg);
    if (marg > 0) t.chi2 += (obs_m - marg) * (obs_m - marg) / (m * marg);
  }
  t.g2 = std::max(2.0 * t.g2, 0.0);
  return t;
}

std::array<double, 64> empirical_distribution(const CodonCounts& u) {
  require_data(u);
  std::array<double, 64> p{};
  for (int c = 0; c < 64; ++c) p[c] = static_cast<double>(u.counts[c]) / static_cast<double>(u.total);
  return p;
}

SegreDiagnostics segre_residual(std::span<const double, 64> p) {
  double total = 0;
  for (double v : p) {
    if (!(v >= 0)) throw Error("probability table has a negative or NaN entry");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error("probability table sums to " + std::to_string(total) + ", not 1");
  }

  // Flattening: rows IJ (16), columns K (4).
  auto entry = [&](int row, int col) { return p[4 * row + col]; };

  SegreDiagnostics d;
  for (int r1 = 0; r1 < 16; ++r1)
    for (int r2 = r1 + 1; r2 < 16; ++r2)
      for (int c1 = 0; c1 < 4; ++c1)
        for (int c2 = c1 + 1; c2 < 4; ++c2) {
          const double minor =
              entry(r1, c1) * entry(r2, c2) - entry(r1, c2) * entry(r2, c1);
          d.max_minor = std::max(d.max_minor, std::abs(minor));
        }

  std::array<std::array<double, 16>, 4> col{};
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 4; ++c) col[c][r] = entry(r, c);

  auto dot = [](const std::array<double, 16>& a, const std::array<double, 16>& b) {
    double s = 0;
    for (int r = 0; r < 16; ++r) s += a[r] * b[r];
    return s;
  };

  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) {
        const double alpha = dot(col[a], col[a]);
        const double beta = dot(col[b], col[b]);
        const double gamma = dot(col[a], col[b]);
        if (gamma == 0 || std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1 + zeta * zeta));
        const double c = 1 / std::sqrt(1 + t * t);
        const double s = c * t;
        for (int r = 0; r < 16; ++r) {
          const double x = col[a][r];
          const double y = col[b][r];
          col[a][r] = c * x - s * y;
          col[b][r] = s * x + c * y;
        }
      }
    if (!rotated) break;
  }
  for (int c = 0; c < 4; ++c) d.singular_values[c] = std::sqrt(dot(col[c], col[c]));
  std::sort(d.singular_values.begin(), d.singular_values.end(), std::greater<>());
  return d;
}

}  // namespace phylokit
