#pragma once

// Pair hidden Markov model for pairwise alignment. An alignment of s1 (length
// n) and s2 (length m) is a word over {M, I, D}: M consumes one letter of
// each, I consumes a letter of s2, D consumes a letter of s1. Ties between
// optimal alignments go to the lexicographically smallest word (D < I < M).

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "phylokit/polygon.hpp"

namespace phylokit {

using BigInt = boost::multiprecision::cpp_int;

enum PairState : int { kMatch = 0, kInsert = 1, kDelete = 2 };

inline constexpr char pair_state_char(int s) { return "MID"[s]; }

// Also used for log-parameters (same layout).
struct PairHmmParams {
  std::array<double, 9> s{};    // transitions, row-major over (M, I, D)
  std::array<double, 16> tm{};  // t_M(a, b), a from s1, b from s2, ACGT order
  std::array<double, 4> ti{};   // t_I(b)
  std::array<double, 4> td{};   // t_D(a)

  double trans(int from, int to) const { return s[from * 3 + to]; }
  double match(int a, int b) const { return tm[a * 4 + b]; }

  // Probability tables must be non-negative; with normalized = true the rows
  // of s, the whole of tm, ti and td must each sum to 1 (±1e-9).
  void validate(bool normalized = false) const;
  // Entrywise natural log.
  PairHmmParams logs() const;
};

using PairHmmLogParams = PairHmmParams;

struct ScoringScheme {
  double mis = 0;
  double gap = 0;
};

struct ScoredAlignment {
  std::string word;
  double score = 0;
};

bool is_valid_alignment(std::string_view word, std::size_t n, std::size_t m);

// Number of alignments of lengths n and m.
BigInt delannoy_count(std::size_t n, std::size_t m);

// All alignments in lexicographic order (D < I < M). Throws Error when there
// are more than cap of them.
std::vector<std::string> enumerate_alignments(std::size_t n, std::size_t m,
                                              std::uint64_t cap = 1'000'000);

// Sum over all alignments of the product of their transition and emission
// parameters; the first position has no transition factor.
double pair_probability(const PairHmmParams& p, std::string_view s1, std::string_view s2);

// Highest-scoring alignment under log-parameters; score is the log of its term.
ScoredAlignment viterbi_alignment_log(const PairHmmLogParams& lp, std::string_view s1,
                                      std::string_view s2);
ScoredAlignment viterbi_alignment(const PairHmmParams& p, std::string_view s1,
                                  std::string_view s2);

// Log-parameters that turn viterbi_alignment_log into the match/mismatch/indel
// scoring scheme: transitions 0, indels -gap, match +1, mismatch -mis.
PairHmmLogParams specialize(const ScoringScheme& scheme);

// Needleman-Wunsch style optimum: +1 per match, -mis per mismatch, -gap per
// indel, same tie rule as the Viterbi alignment.
ScoredAlignment score_alignment_basic(const ScoringScheme& scheme, std::string_view s1,
                                      std::string_view s2);

// Convex hull of the (mismatch count, indel count) pairs over all alignments,
// each vertex annotated with its lexicographically smallest alignment.
LatticePolygon parametric_polygon(std::string_view s1, std::string_view s2);

}  // namespace phylokit
