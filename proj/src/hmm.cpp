#include "phylokit/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "phylokit/error.hpp"
#include "phylokit/kernels.hpp"
#include "phylokit/semiring.hpp"

namespace phylokit {
namespace {

constexpr double kRowTol = 1e-9;

void check_rows(const std::vector<double>& table, std::size_t rows, std::size_t cols,
                const char* name) {
  if (table.size() != rows * cols) {
    throw Error(std::string("hmm: ") + name + " table must be " + std::to_string(rows) + "x" +
                std::to_string(cols));
  }
  for (std::size_t r = 0; r < rows; ++r) {
    double sum = 0;
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = table[r * cols + c];
      if (!(v >= 0)) throw Error(std::string("hmm: negative entry in ") + name);
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowTol) {
      throw Error(std::string("hmm: row ") + std::to_string(r) + " of " + name + " sums to " +
                  std::to_string(sum));
    }
  }
}

void check_observation(const HmmParams& h, const Observation& sigma) {
  if (sigma.empty()) throw Error("hmm: empty observation");
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (sigma[i] < 0 || static_cast<std::size_t>(sigma[i]) >= h.l) {
      throw Error("hmm: symbol " + std::to_string(sigma[i]) + " at position " +
                  std::to_string(i) + " out of range");
    }
  }
}

// Emission table transposed to symbol-major so one symbol's column is
// contiguous.
std::vector<double> emission_columns(const HmmParams& h) {
  std::vector<double> cols(h.k * h.l);
  for (std::size_t i = 0; i < h.k; ++i)
    for (std::size_t v = 0; v < h.l; ++v) cols[v * h.k + i] = h.t(i, v);
  return cols;
}

struct ScaledForward {
  std::vector<double> alpha;  // n x k, each row normalized
  std::vector<double> scale;  // n
};

ScaledForward scaled_forward(const HmmParams& h, const Observation& sigma,
                             const std::vector<double>& ecols) {
  const auto& kern = kernels::active();
  const std::size_t k = h.k;
  const std::size_t n = sigma.size();
  ScaledForward f{std::vector<double>(n * k), std::vector<double>(n)};
  std::span<double> row(f.alpha.data(), k);
  for (std::size_t i = 0; i < k; ++i) row[i] = h.initial[i];
  kern.hadamard(row, std::span<const double>(ecols.data() + sigma[0] * k, k));
  for (std::size_t t = 0;; ++t) {
    std::span<double> cur(f.alpha.data() + t * k, k);
    const double c = kern.sum(cur);
    f.scale[t] = c;
    if (c > 0) {
      for (double& v : cur) v /= c;
    }
    if (t + 1 == n) break;
    std::span<double> next(f.alpha.data() + (t + 1) * k, k);
    kern.vec_mat(cur, h.transitions, k, next);
    kern.hadamard(next, std::span<const double>(ecols.data() + sigma[t + 1] * k, k));
  }
  return f;
}

double log_of_scales(const std::vector<double>& scale) {
  double ll = 0;
  for (double c : scale) {
    if (c <= 0) return -std::numeric_limits<double>::infinity();
    ll += std::log(c);
  }
  return ll;
}

std::string padded(std::size_t i, std::size_t width) {
  std::string s = std::to_string(i);
  return std::string(width - std::min(width, s.size()), '0') + s;
}

// Uniform double in [0, 1) from the top 53 bits.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t draw(std::mt19937_64& rng, const double* probs, std::size_t n) {
  double u = unit(rng);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (u < probs[i]) return i;
    u -= probs[i];
  }
  return n - 1;
}

}  // namespace

void HmmParams::validate() const {
  if (k == 0 || l == 0) throw Error("hmm: k and l must be positive");
  check_rows(transitions, k, k, "transition");
  check_rows(emissions, k, l, "emission");
  if (initial.size() != k) throw Error("hmm: initial weights must have length k");
  if (mode == InitMode::kUnitInitial) {
    for (double v : initial)
      if (v != 1.0) throw Error("hmm: unit-initial mode requires unit initial weights");
  } else {
    double sum = 0;
    for (double v : initial) {
      if (!(v >= 0)) throw Error("hmm: negative initial weight");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowTol) throw Error("hmm: initial weights must sum to 1");
  }
  if (!labels.empty() && labels.size() != k) throw Error("hmm: need one label per state");
  if (!alphabet.empty() && alphabet.size() != l) throw Error("hmm: alphabet must have l symbols");
}

HmmParams HmmParams::make(std::size_t k, std::size_t l, std::vector<double> transitions,
                          std::vector<double> emissions, InitMode mode,
                          std::vector<double> initial) {
  HmmParams h;
  h.k = k;
  h.l = l;
  h.transitions = std::move(transitions);
  h.emissions = std::move(emissions);
  h.mode = mode;
  if (initial.empty()) {
    initial.assign(k, mode == InitMode::kUnitInitial ? 1.0 : 1.0 / static_cast<double>(k));
  }
  h.initial = std::move(initial);
  const std::size_t width = std::to_string(k == 0 ? 0 : k - 1).size();
  for (std::size_t i = 0; i < k; ++i) h.labels.push_back(padded(i, width));
  if (l == 4) {
    h.alphabet = "ACGT";
  } else if (l <= 10) {
    h.alphabet = std::string("0123456789").substr(0, l);
  }
  h.validate();
  return h;
}

Observation encode_observation(const HmmParams& h, std::string_view text) {
  Observation out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto pos = h.alphabet.find(text[i]);
    if (pos == std::string::npos) {
      throw Error("hmm: symbol '" + std::string(1, text[i]) + "' at position " +
                  std::to_string(i) + " is not in the alphabet \"" + h.alphabet + "\"");
    }
    out.push_back(static_cast<int>(pos));
  }
  return out;
}

std::string Explanation::label_text(const HmmParams& h) const {
  bool single = std::all_of(h.labels.begin(), h.labels.end(),
                            [](const std::string& s) { return s.size() == 1; });
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (!single && i > 0) out += ' ';
    out += h.labels.empty() ? std::to_string(path[i]) : h.labels[path[i]];
  }
  return out;
}

double forward_log_probability(const HmmParams& h, const Observation& sigma) {
  h.validate();
  check_observation(h, sigma);
  const auto ecols = emission_columns(h);
  return log_of_scales(scaled_forward(h, sigma, ecols).scale);
}

double forward_probability(const HmmParams& h, const Observation& sigma) {
  return std::exp(forward_log_probability(h, sigma));
}

double path_log_score(const HmmParams& h, const Observation& sigma, const std::vector<int>& path) {
  double v = std::log(h.initial[path[0]]) + std::log(h.t(path[0], sigma[0]));
  for (std::size_t i = 1; i < path.size(); ++i) {
    v += std::log(h.s(path[i - 1], path[i])) + std::log(h.t(path[i], sigma[i]));
  }
  return v;
}

Explanation viterbi_explanation(const HmmParams& h, const Observation& sigma) {
  h.validate();
  check_observation(h, sigma);
  const std::size_t k = h.k;
  const std::size_t n = sigma.size();

  // rank -> state, alphabetical by label.
  std::vector<int> by_label(k);
  std::iota(by_label.begin(), by_label.end(), 0);
  if (!h.labels.empty()) {
    std::stable_sort(by_label.begin(), by_label.end(),
                     [&](int a, int b) { return h.labels[a] < h.labels[b]; });
  }

  ChainSpec<double> spec{n, k, std::vector<double>(k), {}};
  for (std::size_t r = 0; r < k; ++r) {
    const int st = by_label[r];
    spec.initial[r] = MaxPlusSemiring::mul(std::log(h.initial[st]), std::log(h.t(st, sigma[0])));
  }
  for (std::size_t pos = 1; pos < n; ++pos) {
    std::vector<double> w(k * k);
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t q = 0; q < k; ++q) {
        const int a = by_label[r];
        const int b = by_label[q];
        w[r * k + q] = MaxPlusSemiring::mul(std::log(h.s(a, b)), std::log(h.t(b, sigma[pos])));
      }
    spec.steps.push_back(std::move(w));
  }
  auto best = evaluate_chain<MaxPlusSemiring>(spec);
  if (best.value == MaxPlusSemiring::zero()) {
    throw Error("hmm: every hidden path has probability zero");
  }
  Explanation e;
  for (int r : best.path) e.path.push_back(by_label[r]);
  e.log_score = path_log_score(h, sigma, e.path);
  return e;
}

TrainingResult baum_welch_train(const HmmParams& h0, const std::vector<Observation>& data,
                                int max_iters, double tol) {
  h0.validate();
  if (h0.mode != InitMode::kStochastic) throw Error("hmm: training requires stochastic mode");
  if (data.empty()) throw Error("hmm: no training data");
  for (const auto& obs : data) check_observation(h0, obs);

  const std::size_t k = h0.k;
  const std::size_t l = h0.l;
  TrainingResult res{h0, {}, 0, false};

  // E-step: expected counts under res.params; returns total log-likelihood.
  std::vector<double> init_acc(k), trans_acc(k * k), emit_acc(k * l);
  auto expectation = [&](const HmmParams& h) {
    std::fill(init_acc.begin(), init_acc.end(), 0.0);
    std::fill(trans_acc.begin(), trans_acc.end(), 0.0);
    std::fill(emit_acc.begin(), emit_acc.end(), 0.0);
    const auto ecols = emission_columns(h);
    double total = 0;
    for (const auto& obs : data) {
      const std::size_t n = obs.size();
      const auto fwd = scaled_forward(h, obs, ecols);
      const double ll = log_of_scales(fwd.scale);
      total += ll;
      if (!std::isfinite(ll)) continue;
      std::vector<double> beta(n * k, 1.0);
      for (std::size_t t = n - 1; t-- > 0;) {
        for (std::size_t i = 0; i < k; ++i) {
          double acc = 0;
          for (std::size_t j = 0; j < k; ++j) {
            acc += h.s(i, j) * h.t(j, obs[t + 1]) * beta[(t + 1) * k + j];
          }
          beta[t * k + i] = acc / fwd.scale[t + 1];
        }
      }
      for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t i = 0; i < k; ++i) {
          const double gamma = fwd.alpha[t * k + i] * beta[t * k + i];
          if (t == 0) init_acc[i] += gamma;
          emit_acc[i * l + obs[t]] += gamma;
          if (t + 1 < n) {
            for (std::size_t j = 0; j < k; ++j) {
              trans_acc[i * k + j] += fwd.alpha[t * k + i] * h.s(i, j) * h.t(j, obs[t + 1]) *
                                      beta[(t + 1) * k + j] / fwd.scale[t + 1];
            }
          }
        }
      }
    }
    return total;
  };

  auto normalize_rows = [](std::vector<double>& dst, const std::vector<double>& acc,
                           std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
      double sum = 0;
      for (std::size_t c = 0; c < cols; ++c) sum += acc[r * cols + c];
      if (sum <= 0) continue;  // state never visited: keep the old row
      for (std::size_t c = 0; c < cols; ++c) dst[r * cols + c] = acc[r * cols + c] / sum;
    }
  };

  double ll = expectation(res.params);
  res.log_likelihoods.push_back(ll);
  for (int it = 1; it <= max_iters; ++it) {
    HmmParams next_params = res.params;
    normalize_rows(next_params.initial, init_acc, 1, k);
    normalize_rows(next_params.transitions, trans_acc, k, k);
    normalize_rows(next_params.emissions, emit_acc, k, l);
    const double next = expectation(next_params);
    // An update gaining less than tol is dropped and training stops.
    if (next - ll < tol) {
      res.converged = true;
      break;
    }
    res.params = std::move(next_params);
    res.iterations = it;
    res.log_likelihoods.push_back(next);
    ll = next;
  }
  return res;
}

HmmParams random_hmm(std::size_t k, std::size_t l, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto rows = [&](std::size_t r, std::size_t c) {
    std::vector<double> v(r * c);
    for (std::size_t i = 0; i < r; ++i) {
      double s = 0;
      for (std::size_t j = 0; j < c; ++j) s += v[i * c + j] = 0.05 + unit(rng);
      for (std::size_t j = 0; j < c; ++j) v[i * c + j] /= s;
    }
    return v;
  };
  auto trans = rows(k, k);
  auto emit = rows(k, l);
  auto init = rows(1, k);
  return HmmParams::make(k, l, std::move(trans), std::move(emit), InitMode::kStochastic,
                         std::move(init));
}

Observation sample_observation(const HmmParams& h, std::size_t length, std::uint64_t seed) {
  h.validate();
  if (h.mode != InitMode::kStochastic) throw Error("hmm: sampling requires stochastic mode");
  std::mt19937_64 rng(seed);
  Observation out;
  std::size_t state = draw(rng, h.initial.data(), h.k);
  for (std::size_t pos = 0; pos < length; ++pos) {
    if (pos > 0) state = draw(rng, h.transitions.data() + state * h.k, h.k);
    out.push_back(static_cast<int>(draw(rng, h.emissions.data() + state * h.l, h.l)));
  }
  return out;
}

}  // namespace phylokit
