#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <functional>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "phylokit/error.hpp"
#include "phylokit/hmm.hpp"

using namespace phylokit;

namespace {

HmmParams random_model(std::mt19937_64& rng, int k, int l, InitMode mode) {
  std::vector<double> s, t;
  for (int i = 0; i < k; ++i) {
    auto r = oracle::random_stochastic_row(rng, k);
    s.insert(s.end(), r.begin(), r.end());
    auto e = oracle::random_stochastic_row(rng, l);
    t.insert(t.end(), e.begin(), e.end());
  }
  std::vector<double> init;
  if (mode == InitMode::kStochastic) init = oracle::random_stochastic_row(rng, k);
  return HmmParams::make(k, l, s, t, mode, init);
}

Observation random_obs(std::mt19937_64& rng, int l, int n) {
  std::uniform_int_distribution<int> d(0, l - 1);
  Observation o(n);
  for (auto& v : o) v = d(rng);
  return o;
}

// Plain product of one path term, no logs or scaling.
double path_term(const HmmParams& h, const Observation& o, const std::vector<int>& p) {
  double v = h.initial[p[0]] * h.t(p[0], o[0]);
  for (std::size_t i = 1; i < p.size(); ++i) v *= h.s(p[i - 1], p[i]) * h.t(p[i], o[i]);
  return v;
}

double enumerate_sum(const HmmParams& h, const Observation& o) {
  double total = 0;
  oracle::for_each_path(static_cast<int>(h.k), static_cast<int>(o.size()),
                        [&](const std::vector<int>& p) { total += path_term(h, o, p); });
  return total;
}

// First path (in label order) whose log term equals the maximum up to
// rounding slack.
std::vector<int> enumerate_argmax(const HmmParams& h, const Observation& o) {
  std::vector<int> order(h.k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return h.labels[a] < h.labels[b]; });
  auto log_term = [&](const std::vector<int>& ranks, std::vector<int>& p) {
    p.clear();
    for (int r : ranks) p.push_back(order[r]);
    return std::log(path_term(h, o, p));
  };
  const int k = static_cast<int>(h.k), n = static_cast<int>(o.size());
  std::vector<int> p;
  double best = -INFINITY;
  oracle::for_each_path(k, n, [&](const std::vector<int>& r) { best = std::max(best, log_term(r, p)); });
  const double floor = best - oracle::kTieSlack * std::max(1.0, std::abs(best));
  std::vector<int> arg;
  oracle::for_each_path(k, n, [&](const std::vector<int>& r) {
    if (arg.empty() && log_term(r, p) >= floor) arg = p;
  });
  return arg;
}

void all_observations(int l, int n, const std::function<void(const Observation&)>& visit) {
  oracle::for_each_path(l, n, [&](const std::vector<int>& o) { visit(o); });
}

}  // namespace

TEST_CASE("forward: single state is the emission product") {
  auto h = HmmParams::make(1, 4, {1.0}, {0.1, 0.2, 0.3, 0.4}, InitMode::kStochastic);
  auto o = encode_observation(h, "ACGTTG");
  CHECK(forward_probability(h, o) == doctest::Approx(0.1 * 0.2 * 0.3 * 0.4 * 0.4 * 0.3).epsilon(1e-14));
}

TEST_CASE("forward: one symbol in unit-initial mode sums the emission column") {
  std::mt19937_64 rng(3);
  auto h = random_model(rng, 3, 4, InitMode::kUnitInitial);
  for (int sym = 0; sym < 4; ++sym) {
    const double expect = h.t(0, sym) + h.t(1, sym) + h.t(2, sym);
    CHECK(forward_probability(h, {sym}) == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("forward and viterbi match path enumeration") {
  std::mt19937_64 rng(11);
  for (int k = 1; k <= 3; ++k) {
    for (int n = 1; n <= 8; ++n) {
      for (int mode = 0; mode < 2; ++mode) {
        auto h = random_model(rng, k, 4, mode ? InitMode::kStochastic : InitMode::kUnitInitial);
        auto o = random_obs(rng, 4, n);
        const double expect = enumerate_sum(h, o);
        CHECK(std::abs(forward_probability(h, o) - expect) <= 1e-12 * expect);
        auto e = viterbi_explanation(h, o);
        CHECK(e.path == enumerate_argmax(h, o));
        CHECK(e.path.size() == o.size());
        CHECK(std::abs(e.log_score - std::log(path_term(h, o, e.path))) <=
              1e-12 * std::max(1.0, std::abs(e.log_score)));
        CHECK(e.log_score <= forward_log_probability(h, o) + 1e-12);
      }
    }
  }
}

TEST_CASE("forward: k=2, n=6 against the 64-path sum") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    auto h = random_model(rng, 2, 4, InitMode::kStochastic);
    auto o = random_obs(rng, 4, 6);
    const double expect = enumerate_sum(h, o);
    CHECK(std::abs(forward_probability(h, o) - expect) <= 1e-12 * expect);
    CHECK(viterbi_explanation(h, o).path == enumerate_argmax(h, o));
  }
}

TEST_CASE("forward: long observations stay finite in log space") {
  std::mt19937_64 rng(5);
  auto h = random_model(rng, 3, 4, InitMode::kStochastic);
  auto o = random_obs(rng, 4, 5000);
  const double ll = forward_log_probability(h, o);
  CHECK(std::isfinite(ll));
  CHECK(ll < -1000);
  CHECK(viterbi_explanation(h, o).log_score <= ll);
}

TEST_CASE("observation sums: 1 in stochastic mode, k in unit-initial mode") {
  std::mt19937_64 rng(8);
  for (int k = 1; k <= 3; ++k) {
    auto hs = random_model(rng, k, 2, InitMode::kStochastic);
    auto hp = random_model(rng, k, 2, InitMode::kUnitInitial);
    for (int n = 1; n <= 8; ++n) {
      double s1 = 0, s2 = 0;
      all_observations(2, n, [&](const Observation& o) {
        s1 += forward_probability(hs, o);
        s2 += forward_probability(hp, o);
      });
      CHECK(s1 == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(s2 == doctest::Approx(static_cast<double>(k)).epsilon(1e-12));
    }
  }
}

TEST_CASE("viterbi: total tie picks the alphabetically smallest labels") {
  auto h = HmmParams::make(3, 2, std::vector<double>(9, 1.0 / 3), std::vector<double>(6, 0.5),
                           InitMode::kUnitInitial);
  auto e = viterbi_explanation(h, {0, 1, 1, 0});
  CHECK(e.path == std::vector<int>{0, 0, 0, 0});

  h.labels = {"intron", "exon", "zz"};
  e = viterbi_explanation(h, {0, 1, 1, 0});
  CHECK(e.path == std::vector<int>{1, 1, 1, 1});
  CHECK(e.label_text(h) == "exon exon exon exon");
}

TEST_CASE("viterbi: single state") {
  auto h = HmmParams::make(1, 2, {1.0}, {0.25, 0.75}, InitMode::kUnitInitial);
  auto e = viterbi_explanation(h, {1, 0, 1});
  CHECK(e.path == std::vector<int>{0, 0, 0});
  CHECK(e.log_score == doctest::Approx(std::log(0.75 * 0.25 * 0.75)).epsilon(1e-14));
}

TEST_CASE("errors") {
  auto h = HmmParams::make(2, 2, {0.5, 0.5, 0.5, 0.5}, {0.0, 1.0, 0.0, 1.0},
                           InitMode::kStochastic);
  CHECK_THROWS_AS(forward_probability(h, {}), Error);
  CHECK_THROWS_AS(forward_probability(h, {2}), Error);
  CHECK_THROWS_AS(viterbi_explanation(h, {1, -1}), Error);
  CHECK_THROWS_AS(viterbi_explanation(h, {0, 1}), Error);
  CHECK(forward_probability(h, {0, 1}) == 0.0);
  CHECK_THROWS_AS(encode_observation(h, "0x"), Error);
  CHECK_THROWS_AS(HmmParams::make(2, 2, {0.5, 0.6, 0.5, 0.5}, {0.5, 0.5, 0.5, 0.5},
                                  InitMode::kStochastic),
                  Error);
  CHECK_THROWS_AS(HmmParams::make(1, 2, {1.0}, {0.5, 0.5}, InitMode::kUnitInitial, {0.5}), Error);
  CHECK_THROWS_AS(baum_welch_train(HmmParams::make(1, 2, {1.0}, {0.5, 0.5}, InitMode::kUnitInitial),
                                   {{0}}, 5, 1e-9),
                  Error);
  CHECK_THROWS_AS(baum_welch_train(random_hmm(2, 2, 1), {{0, 3}}, 5, 1e-9), Error);
}

TEST_CASE("baum-welch: one state learns symbol frequencies in one update") {
  auto h0 = HmmParams::make(1, 4, {1.0}, {0.25, 0.25, 0.25, 0.25}, InitMode::kStochastic);
  auto planted = HmmParams::make(1, 4, {1.0}, {0.1, 0.2, 0.3, 0.4}, InitMode::kStochastic);
  std::vector<Observation> data;
  std::array<double, 4> freq{};
  double total = 0;
  for (int i = 0; i < 10; ++i) {
    data.push_back(sample_observation(planted, 40, 100 + i));
    for (int v : data.back()) freq[v] += 1, total += 1;
  }
  auto res = baum_welch_train(h0, data, 20, 1e-9);
  CHECK(res.converged);
  CHECK(res.iterations == 1);
  for (int v = 0; v < 4; ++v) CHECK(res.params.t(0, v) == doctest::Approx(freq[v] / total).epsilon(1e-12));
}

TEST_CASE("baum-welch: repeated symbol concentrates the emissions") {
  std::vector<Observation> data(5, Observation(12, 2));
  auto res = baum_welch_train(random_hmm(2, 4, 9), data, 50, 1e-12);
  for (std::size_t i = 0; i < 2; ++i) CHECK(res.params.t(i, 2) >= 0.99);
  res.params.validate();
}

TEST_CASE("baum-welch: planted model, determinism") {
  auto planted = HmmParams::make(2, 2, {0.9, 0.1, 0.2, 0.8}, {0.85, 0.15, 0.1, 0.9},
                                 InitMode::kStochastic, {0.5, 0.5});
  std::vector<Observation> data;
  for (int i = 0; i < 20; ++i) data.push_back(sample_observation(planted, 10, 7000 + i));
  auto h0 = random_hmm(2, 2, 42);
  auto a = baum_welch_train(h0, data, 100, 1e-10);
  auto b = baum_welch_train(random_hmm(2, 2, 42), data, 100, 1e-10);
  CHECK(a.log_likelihoods.back() >= a.log_likelihoods.front());
  CHECK(a.log_likelihoods == b.log_likelihoods);
  CHECK(a.params.transitions == b.params.transitions);
  CHECK(a.params.emissions == b.params.emissions);
  CHECK(a.params.initial == b.params.initial);
  a.params.validate();
}

TEST_CASE("baum-welch: log-likelihood never decreases over 50 iterations") {
  std::mt19937_64 rng(77);
  auto planted = random_model(rng, 3, 4, InitMode::kStochastic);
  std::vector<Observation> data;
  for (int i = 0; i < 10; ++i) data.push_back(sample_observation(planted, 30, 500 + i));
  for (std::uint64_t start = 0; start < 20; ++start) {
    auto res = baum_welch_train(random_hmm(3, 4, 1000 + start), data, 50,
                                -std::numeric_limits<double>::infinity());
    REQUIRE(res.log_likelihoods.size() == 51);
    for (std::size_t i = 1; i < res.log_likelihoods.size(); ++i) {
      CHECK(res.log_likelihoods[i] >= res.log_likelihoods[i - 1] - 1e-9);
    }
  }
}

TEST_CASE("sampling is reproducible") {
  auto h = random_hmm(3, 4, 1);
  CHECK(sample_observation(h, 100, 5) == sample_observation(h, 100, 5));
  CHECK(sample_observation(h, 100, 5) != sample_observation(h, 100, 6));
}
