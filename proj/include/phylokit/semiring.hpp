#pragma once

// One dynamic-programming engine, three arithmetics.
//
// A semiring policy supplies Value, zero(), one(), add() and mul(). Selective
// semirings (max-plus) also expose attains(v, optimum), used to recover the
// lexicographically smallest optimal path.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "phylokit/error.hpp"
#include "phylokit/polygon.hpp"

namespace phylokit {

struct ProbSemiring {
  using Value = double;
  static constexpr bool kSelective = false;
  static Value zero() { return 0.0; }
  static Value one() { return 1.0; }
  static Value add(Value a, Value b) { return a + b; }
  static Value mul(Value a, Value b) { return a * b; }
};

// Natural-log domain; -inf is the absorbing zero.
struct MaxPlusSemiring {
  using Value = double;
  static constexpr bool kSelective = true;
  static Value zero() { return -std::numeric_limits<double>::infinity(); }
  static Value one() { return 0.0; }
  static Value add(Value a, Value b) { return b > a ? b : a; }
  static Value mul(Value a, Value b) {
    if (a == zero() || b == zero()) return zero();
    return a + b;
  }
  // Whether a candidate total equals the optimum up to rounding: paths whose
  // values agree exactly in real arithmetic can differ in the last bits
  // depending on summation order.
  static bool attains(Value candidate, Value optimum) {
    return candidate >= optimum - kTieSlack * std::max(1.0, std::abs(optimum));
  }
  static constexpr double kTieSlack = 1e-11;
};

struct PolygonSemiring {
  using Value = LatticePolygon;
  static constexpr bool kSelective = false;
  static Value zero() { return {}; }
  static Value one() { return LatticePolygon::point({0, 0}); }
  static Value add(const Value& a, const Value& b) { return polygon_sum(a, b); }
  static Value mul(const Value& a, const Value& b) { return polygon_product(a, b); }
};

// Max-plus value with an optional decision label for back-tracking.
struct TropicalValue {
  double value = MaxPlusSemiring::zero();
  std::optional<int> tag;
};

// Weights of a homogeneous-shape chain: the value of a state path
// (i_1, ..., i_n) is initial[i_1] * step[0][i_1][i_2] * ... *
// step[n-2][i_{n-1}][i_n]. Step matrices are row-major (from, to).
template <class V>
struct ChainSpec {
  std::size_t length = 0;
  std::size_t states = 0;
  std::vector<V> initial;
  std::vector<std::vector<V>> steps;

  void validate() const {
    if (length == 0 || states == 0) throw Error("chain: length and states must be positive");
    if (initial.size() != states) throw Error("chain: initial weights have wrong size");
    if (steps.size() != length - 1) {
      throw Error("chain: expected " + std::to_string(length - 1) + " step matrices, got " +
                  std::to_string(steps.size()));
    }
    for (std::size_t t = 0; t < steps.size(); ++t) {
      if (steps[t].size() != states * states) {
        throw Error("chain: step " + std::to_string(t) + " is not " + std::to_string(states) +
                    "x" + std::to_string(states));
      }
    }
  }
};

template <class S>
struct ChainResult {
  typename S::Value value;
  // Arg-max state path; filled for selective semirings only.
  std::vector<int> path;
};

// Sum over all state paths of the product of their weights, evaluated
// innermost-first (Horner form). For selective semirings the returned path is
// the lexicographically smallest path whose value attains the optimum (up to
// S::attains rounding slack): suffix optima are computed first, then the path
// is read off front to back, taking at each position the smallest state whose
// prefix value times best completion still attains the optimum.
template <class S>
ChainResult<S> evaluate_chain(const ChainSpec<typename S::Value>& spec) {
  using V = typename S::Value;
  spec.validate();
  const std::size_t k = spec.states;
  const std::size_t n = spec.length;

  // suffix[t][i]: sum over completions of a path in state i at position t.
  std::vector<std::vector<V>> suffix(n);
  suffix[n - 1].assign(k, S::one());
  for (std::size_t t = n - 1; t-- > 0;) {
    const auto& w = spec.steps[t];
    suffix[t].assign(k, S::zero());
    for (std::size_t i = 0; i < k; ++i) {
      V acc = S::zero();
      for (std::size_t j = 0; j < k; ++j) acc = S::add(acc, S::mul(w[i * k + j], suffix[t + 1][j]));
      suffix[t][i] = std::move(acc);
    }
  }

  ChainResult<S> result{S::zero(), {}};
  for (std::size_t i = 0; i < k; ++i) {
    result.value = S::add(result.value, S::mul(spec.initial[i], suffix[0][i]));
  }
  if constexpr (S::kSelective) {
    V prefix = S::one();
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t j = 0; j < k; ++j) {
        const V& w = t == 0 ? spec.initial[j] : spec.steps[t - 1][result.path.back() * k + j];
        const V reach = S::mul(prefix, w);
        if (S::attains(S::mul(reach, suffix[t][j]), result.value) || j + 1 == k) {
          result.path.push_back(static_cast<int>(j));
          prefix = reach;
          break;
        }
      }
    }
  }
  return result;
}

// Max-plus evaluation packaged as a tagged value (tag = first state of the
// optimal path).
inline TropicalValue evaluate_chain_tropical(const ChainSpec<double>& spec) {
  auto r = evaluate_chain<MaxPlusSemiring>(spec);
  return {r.value, r.path.empty() ? std::nullopt : std::optional<int>(r.path.front())};
}

}  // namespace phylokit
