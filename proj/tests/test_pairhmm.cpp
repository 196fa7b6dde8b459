#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "phylokit/error.hpp"
#include "phylokit/pairhmm.hpp"
#include "short_pair_monomials.hpp"

using namespace phylokit;

namespace {

PairHmmParams random_params(std::mt19937_64& rng, bool normalized = true) {
  PairHmmParams p;
  auto fill = [&](double* v, int len) {
    auto r = oracle::random_stochastic_row(rng, len);
    for (int i = 0; i < len; ++i) v[i] = normalized ? r[i] : r[i] * 3.0;
  };
  for (int r = 0; r < 3; ++r) fill(p.s.data() + 3 * r, 3);
  fill(p.tm.data(), 16);
  fill(p.ti.data(), 4);
  fill(p.td.data(), 4);
  return p;
}

double enumerated_sum(const PairHmmParams& p, const std::string& s1, const std::string& s2) {
  oracle::CompensatedSum total;
  oracle::for_each_alignment(s1.size(), s2.size(), [&](const std::string& w) {
    total.add(oracle::alignment_term(p, s1, s2, w));
  });
  return total.value();
}

// First alignment (lexicographic) whose log term equals the maximum up to
// rounding slack.
std::string enumerated_argmax(const PairHmmParams& lp, const std::string& s1,
                              const std::string& s2) {
  double best = -INFINITY;
  oracle::for_each_alignment(s1.size(), s2.size(), [&](const std::string& w) {
    best = std::max(best, oracle::alignment_term(lp, s1, s2, w, true));
  });
  const double floor = best - oracle::kTieSlack * std::max(1.0, std::abs(best));
  std::string arg;
  oracle::for_each_alignment(s1.size(), s2.size(), [&](const std::string& w) {
    if (arg.empty() && oracle::alignment_term(lp, s1, s2, w, true) >= floor) arg = w;
  });
  return arg;
}

// Achievable (mismatch, indel) points with the smallest alignment reaching
// each, built forward over the grid (smallest prefix per cell and point).
std::map<LatticePoint, std::string> achievable_points(const std::string& s1,
                                                      const std::string& s2) {
  const std::size_t n = s1.size(), m = s2.size();
  std::vector<std::map<LatticePoint, std::string>> cell((n + 1) * (m + 1));
  cell[0][{0, 0}] = "";
  auto offer = [&](std::size_t i, std::size_t j, LatticePoint p, const std::string& w) {
    auto& c = cell[i * (m + 1) + j];
    auto it = c.find(p);
    if (it == c.end() || w < it->second) c[p] = w;
  };
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= m; ++j) {
      for (const auto& [p, w] : cell[i * (m + 1) + j]) {
        if (i < n) offer(i + 1, j, {p.x, p.y + 1}, w + "D");
        if (j < m) offer(i, j + 1, {p.x, p.y + 1}, w + "I");
        if (i < n && j < m) offer(i + 1, j + 1, {p.x + (s1[i] != s2[j]), p.y}, w + "M");
      }
    }
  }
  return cell.back();
}

void check_polygon(const std::string& s1, const std::string& s2) {
  const auto poly = parametric_polygon(s1, s2);
  const auto pts = achievable_points(s1, s2);
  std::vector<LatticePoint> all;
  for (const auto& [p, w] : pts) all.push_back(p);
  REQUIRE(poly.vertices() == oracle::gift_wrap(all));
  for (std::size_t v = 0; v < poly.size(); ++v) {
    CHECK(poly.witnesses()[v] == pts.at(poly.vertices()[v]));
    CHECK(oracle::alignment_point(s1, s2, poly.witnesses()[v]) == poly.vertices()[v]);
  }
}

}  // namespace

TEST_CASE("delannoy numbers") {
  CHECK(delannoy_count(2, 3) == 25);
  CHECK(delannoy_count(1, 1) == 3);
  for (std::size_t m = 0; m < 10; ++m) CHECK(delannoy_count(0, m) == 1);
  CHECK(delannoy_count(3, 3) == 63);
  // Closed form: sum_k C(n,k) C(m,k) 2^k.
  for (std::size_t n : {5u, 17u, 60u}) {
    for (std::size_t m : {4u, 23u, 60u}) {
      BigInt expect = 0;
      for (std::size_t k = 0; k <= std::min(n, m); ++k) {
        BigInt cn = 1, cm = 1;
        for (std::size_t t = 0; t < k; ++t) {
          cn = cn * (n - t) / (t + 1);
          cm = cm * (m - t) / (t + 1);
        }
        expect += cn * cm * (BigInt(1) << k);
      }
      CHECK(delannoy_count(n, m) == expect);
      CHECK(delannoy_count(m, n) == expect);
    }
  }
}

TEST_CASE("enumerate_alignments") {
  CHECK(enumerate_alignments(1, 1) == std::vector<std::string>{"DI", "ID", "M"});
  auto w33 = enumerate_alignments(3, 3);
  CHECK(w33.size() == 63);
  CHECK(std::is_sorted(w33.begin(), w33.end()));
  CHECK(std::set<std::string>(w33.begin(), w33.end()).size() == 63);
  for (const auto& w : w33) CHECK(is_valid_alignment(w, 3, 3));

  std::set<std::string> table;
  for (const auto& [w, mono] : short_pair::kRows) table.insert(std::string(w));
  auto w23 = enumerate_alignments(2, 3);
  CHECK(std::set<std::string>(w23.begin(), w23.end()) == table);

  std::vector<std::string> streamed;
  oracle::for_each_alignment(4, 5, [&](const std::string& w) { streamed.push_back(w); });
  CHECK(enumerate_alignments(4, 5) == streamed);

  try {
    enumerate_alignments(10, 10);
    FAIL("expected the cap to trigger");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("8097453") != std::string::npos);
  }
  CHECK(enumerate_alignments(10, 10, 10'000'000).size() == 8097453);
}

TEST_CASE("pair_probability: one letter each") {
  std::mt19937_64 rng(1);
  auto p = random_params(rng);
  const double expect = p.match(2, 1) + p.ti[1] * p.trans(kInsert, kDelete) * p.td[2] +
                        p.td[2] * p.trans(kDelete, kInsert) * p.ti[1];
  CHECK(pair_probability(p, "G", "C") == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("pair_probability: the 25 monomials for lengths 2 and 3") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    auto p = random_params(rng, trial % 2 == 0);
    const auto s1 = oracle::random_dna(rng, 2);
    const auto s2 = oracle::random_dna(rng, 3);
    double expect = 0;
    for (const auto& [w, mono] : short_pair::kRows) {
      const double v = short_pair::monomial(p, mono, s1, s2);
      CHECK(v == doctest::Approx(oracle::alignment_term(p, s1, s2, std::string(w))).epsilon(1e-15));
      expect += v;
    }
    CHECK(std::abs(pair_probability(p, s1, s2) - expect) <= 1e-12 * expect);
  }
}

TEST_CASE("pair_probability and viterbi match enumeration up to length 6") {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 6; ++n) {
    for (int m = 1; m <= 6; ++m) {
      auto p = random_params(rng);
      const auto s1 = oracle::random_dna(rng, n);
      const auto s2 = oracle::random_dna(rng, m);
      const double expect = enumerated_sum(p, s1, s2);
      CHECK(std::abs(pair_probability(p, s1, s2) - expect) <= 1e-12 * expect);

      auto v = viterbi_alignment(p, s1, s2);
      CHECK(is_valid_alignment(v.word, n, m));
      CHECK(v.word == enumerated_argmax(p.logs(), s1, s2));
      const double rescored = oracle::alignment_term(p.logs(), s1, s2, v.word, true);
      CHECK(std::abs(v.score - rescored) <= 1e-12 * std::abs(rescored));
      CHECK(v.score <= std::log(expect) + 1e-12);
    }
  }
}

TEST_CASE("viterbi: ties and dominant matches") {
  PairHmmLogParams zero;
  CHECK(viterbi_alignment_log(zero, "ACG", "TT").word == "DDDII");
  CHECK(viterbi_alignment_log(zero, "A", "GTC").word == "DIII");

  PairHmmParams p;
  p.s = {0.9, 0.05, 0.05, 0.5, 0.25, 0.25, 0.5, 0.25, 0.25};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) p.tm[a * 4 + b] = a == b ? 0.22 : 0.01;
  p.ti.fill(0.25);
  p.td.fill(0.25);
  CHECK(viterbi_alignment(p, "ACGTTGCA", "ACGTTGCA").word == "MMMMMMMM");
}

TEST_CASE("errors") {
  PairHmmParams p;
  p.s.fill(1.0 / 3);
  p.tm.fill(1.0 / 16);
  p.ti.fill(0.25);
  p.td.fill(0.25);
  CHECK_THROWS_AS(pair_probability(p, "", "A"), Error);
  CHECK_THROWS_AS(pair_probability(p, "A", ""), Error);
  CHECK_THROWS_AS(viterbi_alignment(p, "AXG", "A"), Error);
  CHECK_THROWS_AS(score_alignment_basic({1, 1}, "A", "N"), Error);
  CHECK_THROWS_AS(parametric_polygon("A", "A-"), Error);
  CHECK_THROWS_AS(score_alignment_basic({-1, 1}, "A", "A"), Error);
  PairHmmParams dead = p;
  dead.tm.fill(0);
  dead.ti.fill(0);
  CHECK(pair_probability(dead, "A", "C") == 0.0);
  CHECK_THROWS_AS(viterbi_alignment(dead, "A", "C"), Error);
}

TEST_CASE("score_alignment_basic") {
  auto r = score_alignment_basic({0.7, 2.0}, "GATTACA", "GATTACA");
  CHECK(r.word == "MMMMMMM");
  CHECK(r.score == 7.0);

  r = score_alignment_basic({1, 10}, "ACGT", "ACGA");
  CHECK(r.word == "MMMM");
  CHECK(r.score == 2.0);
  std::size_t count = 0;
  double best = -INFINITY;
  oracle::for_each_alignment(4, 4, [&](const std::string& w) {
    ++count;
    auto pt = oracle::alignment_point("ACGT", "ACGA", w);
    const double matches = static_cast<double>((8 - pt.y) / 2 - pt.x);
    best = std::max(best, matches - 1.0 * pt.x - 10.0 * pt.y);
  });
  CHECK(count == 321);
  CHECK(best == 2.0);
}

TEST_CASE("score_alignment_basic equals the specialized viterbi alignment") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  std::uniform_int_distribution<int> len(1, 12);
  for (int trial = 0; trial < 100; ++trial) {
    ScoringScheme sc{u(rng), u(rng)};
    if (trial % 10 == 0) sc = {static_cast<double>(trial % 3), static_cast<double>(trial % 2)};
    const auto s1 = oracle::random_dna(rng, len(rng));
    const auto s2 = oracle::random_dna(rng, len(rng));
    auto basic = score_alignment_basic(sc, s1, s2);
    auto vit = viterbi_alignment_log(specialize(sc), s1, s2);
    CHECK(basic.word == vit.word);
    CHECK(basic.score == vit.score);
    if (s1.size() <= 6 && s2.size() <= 6) {
      CHECK(basic.word == enumerated_argmax(specialize(sc), s1, s2));
    }
  }
}

TEST_CASE("parametric polygon") {
  auto same = parametric_polygon("ACGTAC", "ACGTAC");
  CHECK(same.vertices().front() == LatticePoint{0, 0});
  CHECK(same.witnesses().front() == "MMMMMM");

  // Every alignment of AC / GTA, hull of their points.
  std::map<LatticePoint, std::string> smallest;
  oracle::for_each_alignment(2, 3, [&](const std::string& w) {
    auto p = oracle::alignment_point("AC", "GTA", w);
    if (!smallest.count(p)) smallest[p] = w;
  });
  std::vector<LatticePoint> pts;
  for (const auto& [p, w] : smallest) pts.push_back(p);
  auto poly = parametric_polygon("AC", "GTA");
  REQUIRE(poly.vertices() == oracle::gift_wrap(pts));
  for (std::size_t v = 0; v < poly.size(); ++v) {
    CHECK(poly.witnesses()[v] == smallest.at(poly.vertices()[v]));
  }

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    check_polygon(oracle::random_dna(rng, 10), oracle::random_dna(rng, 10));
  }
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> len(1, 9);
    check_polygon(oracle::random_dna(rng, len(rng)), oracle::random_dna(rng, len(rng)));
  }
}

TEST_CASE("parametric polygon: vertex counts up to length 50") {
  std::mt19937_64 rng(6);
  for (int n : {10, 20, 30, 40, 50}) {
    auto poly = parametric_polygon(oracle::random_dna(rng, n), oracle::random_dna(rng, n));
    MESSAGE("length " << n << ": " << poly.size() << " vertices");
    CHECK(poly.size() >= 1);
    CHECK(BigInt(poly.size()) <= delannoy_count(n, n));
    for (const auto& w : poly.witnesses()) CHECK(is_valid_alignment(w, n, n));
  }
}
