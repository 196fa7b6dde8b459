#include "phylokit/pairhmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phylokit/error.hpp"
#include "phylokit/nucleotide.hpp"
#include "phylokit/semiring.hpp"

namespace phylokit {
namespace {

// Successor order that realizes D < I < M.
constexpr int kTieOrder[3] = {kDelete, kInsert, kMatch};

std::vector<int> encode(std::string_view s, const char* which) {
  if (s.empty()) throw Error(std::string("align: ") + which + " is empty");
  std::vector<int> out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const int c = nucleotide_index(s[i]);
    if (c < 0) {
      throw Error(std::string("align: invalid character '") + s[i] + "' at position " +
                  std::to_string(i) + " of " + which);
    }
    out.push_back(c);
  }
  return out;
}

// Backward DP over the alignment grid. value(x, i, j) is the semiring sum over
// all ways to finish from (i, j) after state x; x = 3 is the start, which has
// no transition factor. W supplies trans(x, y) and emit(y, i, j).
template <class S, class W>
class AlignmentDp {
 public:
  using V = typename S::Value;

  AlignmentDp(std::size_t n, std::size_t m, const W& w)
      : n_(n), m_(m), w_(w), table_(3 * (n + 1) * (m + 1), S::zero()) {
    for (std::size_t i = n + 1; i-- > 0;) {
      for (std::size_t j = m + 1; j-- > 0;) {
        for (int x = 0; x < 3; ++x) {
          at(x, i, j) = (i == n && j == m) ? S::one() : combine(x, i, j);
        }
      }
    }
    total_ = combine(3, 0, 0);
  }

  const V& total() const { return total_; }

  // Lexicographically smallest word attaining the optimum (selective
  // semirings): extend by the smallest letter whose prefix value times best
  // completion still attains the total.
  std::string read_off() const {
    std::string word;
    int x = 3;
    std::size_t i = 0, j = 0;
    V prefix = S::one();
    while (i < n_ || j < m_) {
      int chosen = -1;
      V chosen_reach{};
      for (int y : kTieOrder) {
        if (!feasible(y, i, j)) continue;
        const V reach = S::mul(prefix, step(x, y, i, j));
        chosen = y;
        chosen_reach = reach;
        if (S::attains(S::mul(reach, at(y, i + advances_s1(y), j + advances_s2(y))), total_)) {
          break;
        }
      }
      word += pair_state_char(chosen);
      i += advances_s1(chosen);
      j += advances_s2(chosen);
      x = chosen;
      prefix = chosen_reach;
    }
    return word;
  }

 private:
  static std::size_t advances_s1(int y) { return y != kInsert; }
  static std::size_t advances_s2(int y) { return y != kDelete; }

  bool feasible(int y, std::size_t i, std::size_t j) const {
    return i + advances_s1(y) <= n_ && j + advances_s2(y) <= m_;
  }

  V step(int x, int y, std::size_t i, std::size_t j) const {
    return x == 3 ? w_.emit(y, i, j) : S::mul(w_.trans(x, y), w_.emit(y, i, j));
  }

  V term(int x, int y, std::size_t i, std::size_t j) const {
    return S::mul(step(x, y, i, j), at(y, i + advances_s1(y), j + advances_s2(y)));
  }

  V combine(int x, std::size_t i, std::size_t j) const {
    V acc = S::zero();
    for (int y : kTieOrder) {
      if (feasible(y, i, j)) acc = S::add(acc, term(x, y, i, j));
    }
    return acc;
  }

  V& at(int x, std::size_t i, std::size_t j) { return table_[(x * (n_ + 1) + i) * (m_ + 1) + j]; }
  const V& at(int x, std::size_t i, std::size_t j) const {
    return table_[(x * (n_ + 1) + i) * (m_ + 1) + j];
  }

  std::size_t n_, m_;
  const W& w_;
  std::vector<V> table_;
  V total_{};
};

struct ParamWeights {
  const PairHmmParams& p;
  const std::vector<int>& a;
  const std::vector<int>& b;
  double trans(int x, int y) const { return p.trans(x, y); }
  double emit(int y, std::size_t i, std::size_t j) const {
    switch (y) {
      case kMatch: return p.match(a[i], b[j]);
      case kInsert: return p.ti[b[j]];
      default: return p.td[a[i]];
    }
  }
};

struct PolygonWeights {
  const std::vector<int>& a;
  const std::vector<int>& b;
  LatticePolygon trans(int, int) const { return PolygonSemiring::one(); }
  LatticePolygon emit(int y, std::size_t i, std::size_t j) const {
    if (y == kMatch) return LatticePolygon::point({a[i] != b[j] ? 1 : 0, 0}, "M");
    return LatticePolygon::point({0, 1}, std::string(1, pair_state_char(y)));
  }
};

}  // namespace

void PairHmmParams::validate(bool normalized) const {
  auto check = [&](const double* v, std::size_t len, const char* name) {
    double sum = 0;
    for (std::size_t i = 0; i < len; ++i) {
      if (!(v[i] >= 0)) throw Error(std::string("align: negative parameter in ") + name);
      sum += v[i];
    }
    if (normalized && std::abs(sum - 1.0) > 1e-9) {
      throw Error(std::string("align: ") + name + " does not sum to 1");
    }
  };
  for (int r = 0; r < 3; ++r) check(s.data() + 3 * r, 3, "transition row");
  check(tm.data(), 16, "match emissions");
  check(ti.data(), 4, "insertion emissions");
  check(td.data(), 4, "deletion emissions");
}

PairHmmParams PairHmmParams::logs() const {
  PairHmmParams out;
  auto apply = [](const auto& src, auto& dst) {
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = std::log(src[i]);
  };
  apply(s, out.s);
  apply(tm, out.tm);
  apply(ti, out.ti);
  apply(td, out.td);
  return out;
}

bool is_valid_alignment(std::string_view word, std::size_t n, std::size_t m) {
  std::size_t used1 = 0, used2 = 0;
  for (char c : word) {
    if (c == 'M') {
      ++used1, ++used2;
    } else if (c == 'I') {
      ++used2;
    } else if (c == 'D') {
      ++used1;
    } else {
      return false;
    }
  }
  return used1 == n && used2 == m;
}

BigInt delannoy_count(std::size_t n, std::size_t m) {
  std::vector<BigInt> row(m + 1, 1);
  for (std::size_t i = 1; i <= n; ++i) {
    BigInt diag = row[0];
    for (std::size_t j = 1; j <= m; ++j) {
      BigInt up = row[j];
      row[j] = row[j] + row[j - 1] + diag;
      diag = up;
    }
  }
  return row[m];
}

std::vector<std::string> enumerate_alignments(std::size_t n, std::size_t m, std::uint64_t cap) {
  const BigInt count = delannoy_count(n, m);
  if (count > cap) {
    throw Error("align: " + count.str() + " alignments exceed the enumeration cap of " +
                std::to_string(cap));
  }
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(count));
  std::string word;
  auto rec = [&](auto&& self, std::size_t i, std::size_t j) -> void {
    if (i == n && j == m) {
      out.push_back(word);
      return;
    }
    for (int y : kTieOrder) {
      const std::size_t ni = i + (y != kInsert);
      const std::size_t nj = j + (y != kDelete);
      if (ni > n || nj > m) continue;
      word.push_back(pair_state_char(y));
      self(self, ni, nj);
      word.pop_back();
    }
  };
  rec(rec, 0, 0);
  return out;
}

double pair_probability(const PairHmmParams& p, std::string_view s1, std::string_view s2) {
  p.validate();
  const auto a = encode(s1, "first sequence");
  const auto b = encode(s2, "second sequence");
  ParamWeights w{p, a, b};
  return AlignmentDp<ProbSemiring, ParamWeights>(a.size(), b.size(), w).total();
}

ScoredAlignment viterbi_alignment_log(const PairHmmLogParams& lp, std::string_view s1,
                                      std::string_view s2) {
  const auto a = encode(s1, "first sequence");
  const auto b = encode(s2, "second sequence");
  ParamWeights w{lp, a, b};
  AlignmentDp<MaxPlusSemiring, ParamWeights> dp(a.size(), b.size(), w);
  if (dp.total() == MaxPlusSemiring::zero()) {
    throw Error("align: every alignment has probability zero");
  }
  return {dp.read_off(), dp.total()};
}

ScoredAlignment viterbi_alignment(const PairHmmParams& p, std::string_view s1,
                                  std::string_view s2) {
  p.validate();
  return viterbi_alignment_log(p.logs(), s1, s2);
}

PairHmmLogParams specialize(const ScoringScheme& scheme) {
  if (!(scheme.mis >= 0) || !(scheme.gap >= 0)) {
    throw Error("align: mis and gap must be non-negative");
  }
  PairHmmLogParams lp;
  lp.s.fill(0.0);
  lp.ti.fill(-scheme.gap);
  lp.td.fill(-scheme.gap);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) lp.tm[x * 4 + y] = x == y ? 1.0 : -scheme.mis;
  return lp;
}

ScoredAlignment score_alignment_basic(const ScoringScheme& scheme, std::string_view s1,
                                      std::string_view s2) {
  if (!(scheme.mis >= 0) || !(scheme.gap >= 0)) {
    throw Error("align: mis and gap must be non-negative");
  }
  const auto a = encode(s1, "first sequence");
  const auto b = encode(s2, "second sequence");
  const std::size_t n = a.size(), m = b.size();
  // best[i][j]: optimal score of aligning the suffixes a[i..], b[j..].
  std::vector<double> best((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> double& { return best[i * (m + 1) + j]; };
  auto step = [&](int y, std::size_t i, std::size_t j) {
    if (y == kMatch) return (a[i] == b[j] ? 1.0 : -scheme.mis) + at(i + 1, j + 1);
    if (y == kInsert) return -scheme.gap + at(i, j + 1);
    return -scheme.gap + at(i + 1, j);
  };
  auto feasible = [&](int y, std::size_t i, std::size_t j) {
    return i + (y != kInsert) <= n && j + (y != kDelete) <= m;
  };
  for (std::size_t i = n + 1; i-- > 0;) {
    for (std::size_t j = m + 1; j-- > 0;) {
      if (i == n && j == m) {
        at(i, j) = 0;
        continue;
      }
      double v = -std::numeric_limits<double>::infinity();
      for (int y : kTieOrder)
        if (feasible(y, i, j)) v = std::max(v, step(y, i, j));
      at(i, j) = v;
    }
  }
  ScoredAlignment out{{}, at(0, 0)};
  std::size_t i = 0, j = 0;
  double prefix = 0;
  while (i < n || j < m) {
    int chosen = -1;
    double gain = 0;
    for (int y : kTieOrder) {
      if (!feasible(y, i, j)) continue;
      chosen = y;
      gain = y == kMatch ? (a[i] == b[j] ? 1.0 : -scheme.mis) : -scheme.gap;
      const double rest = at(i + (y != kInsert), j + (y != kDelete));
      if (MaxPlusSemiring::attains(prefix + gain + rest, out.score)) break;
    }
    out.word += pair_state_char(chosen);
    prefix += gain;
    i += chosen != kInsert;
    j += chosen != kDelete;
  }
  return out;
}

LatticePolygon parametric_polygon(std::string_view s1, std::string_view s2) {
  const auto a = encode(s1, "first sequence");
  const auto b = encode(s2, "second sequence");
  PolygonWeights w{a, b};
  return AlignmentDp<PolygonSemiring, PolygonWeights>(a.size(), b.size(), w).total();
}

}  // namespace phylokit
