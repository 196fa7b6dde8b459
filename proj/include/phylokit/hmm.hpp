#pragma once

// Homogeneous hidden Markov model over k hidden states and l symbols.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace phylokit {

enum class InitMode {
  // Every first state has weight 1 (no initial distribution). The value of an
  // observation is then the bare nested sum of transition/emission products.
  kUnitInitial,
  // Initial weights form a probability vector.
  kStochastic,
};

struct HmmParams {
  std::size_t k = 0;
  std::size_t l = 0;
  std::vector<double> transitions;  // k x k, row-major (from, to)
  std::vector<double> emissions;    // k x l, row-major (state, symbol)
  std::vector<double> initial;      // k
  InitMode mode = InitMode::kStochastic;
  // Hidden-state labels; ties between optimal paths go to the path that is
  // lexicographically smallest under alphabetical label order.
  std::vector<std::string> labels;
  // Observation alphabet, one character per symbol.
  std::string alphabet;

  double s(std::size_t i, std::size_t j) const { return transitions[i * k + j]; }
  double t(std::size_t i, std::size_t sym) const { return emissions[i * l + sym]; }

  // Throws Error when a table has the wrong shape, a negative entry, a row
  // not summing to 1 (±1e-9) or initial weights inconsistent with the mode.
  void validate() const;

  // Fills default labels ("0", "1", ... zero-padded), alphabet ("ACGT" for
  // l = 4, digits otherwise) and, in unit-initial mode, unit initial weights.
  static HmmParams make(std::size_t k, std::size_t l, std::vector<double> transitions,
                        std::vector<double> emissions, InitMode mode,
                        std::vector<double> initial = {});
};

using Observation = std::vector<int>;

// Symbol indices of text under the model's alphabet.
Observation encode_observation(const HmmParams& h, std::string_view text);

struct Explanation {
  std::vector<int> path;  // state indices
  double log_score = 0;   // log of the single path term

  std::string label_text(const HmmParams& h) const;
};

// Sum over all k^n hidden paths, computed with per-position scaling.
double forward_log_probability(const HmmParams& h, const Observation& sigma);
double forward_probability(const HmmParams& h, const Observation& sigma);

// Highest-scoring hidden path (max-plus evaluation of the same recursion).
Explanation viterbi_explanation(const HmmParams& h, const Observation& sigma);

// log of init * t * s * t ... for one path.
double path_log_score(const HmmParams& h, const Observation& sigma, const std::vector<int>& path);

struct TrainingResult {
  HmmParams params;
  // log_likelihoods[i]: total data log-likelihood after i accepted updates.
  std::vector<double> log_likelihoods;
  int iterations = 0;
  bool converged = false;
};

// Baum-Welch (EM). Stops after max_iters updates or at the first update that
// improves the log-likelihood by less than tol; that update is not applied.
// h0 must be in stochastic mode.
TrainingResult baum_welch_train(const HmmParams& h0, const std::vector<Observation>& data,
                                int max_iters, double tol);

// Stochastic-mode model with random rows (deterministic for a seed).
HmmParams random_hmm(std::size_t k, std::size_t l, std::uint64_t seed);

// Draws an observation of the given length from a stochastic-mode model.
Observation sample_observation(const HmmParams& h, std::size_t length, std::uint64_t seed);

}  // namespace phylokit
