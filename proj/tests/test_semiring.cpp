#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "phylokit/semiring.hpp"

using namespace phylokit;

namespace {

ChainSpec<double> random_chain(std::mt19937_64& rng, std::size_t k, std::size_t n) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  ChainSpec<double> spec{n, k, std::vector<double>(k), {}};
  for (auto& v : spec.initial) v = u(rng);
  for (std::size_t t = 0; t + 1 < n; ++t) {
    std::vector<double> w(k * k);
    for (auto& v : w) v = u(rng);
    spec.steps.push_back(w);
  }
  return spec;
}

double path_product(const ChainSpec<double>& s, const std::vector<int>& p) {
  double v = s.initial[p[0]];
  for (std::size_t t = 1; t < p.size(); ++t) v *= s.steps[t - 1][p[t - 1] * s.states + p[t]];
  return v;
}

double path_log(const ChainSpec<double>& s, const std::vector<int>& p) {
  double v = std::log(s.initial[p[0]]);
  for (std::size_t t = 1; t < p.size(); ++t) {
    v += std::log(s.steps[t - 1][p[t - 1] * s.states + p[t]]);
  }
  return v;
}

ChainSpec<double> log_of(const ChainSpec<double>& s) {
  ChainSpec<double> out = s;
  for (auto& v : out.initial) v = std::log(v);
  for (auto& w : out.steps)
    for (auto& v : w) v = std::log(v);
  return out;
}

LatticePolygon random_polygon(std::mt19937_64& rng, int points, int range = 6) {
  std::uniform_int_distribution<int> c(-range, range);
  std::vector<LatticePoint> pts;
  for (int i = 0; i < points; ++i) pts.push_back({c(rng), c(rng)});
  return LatticePolygon::hull(pts);
}

}  // namespace

TEST_CASE("evaluate_chain: single step returns the sum of initial weights") {
  ChainSpec<double> spec{1, 2, {0.2, 0.8}, {}};
  CHECK(evaluate_chain<ProbSemiring>(spec).value == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("evaluate_chain: total tie in max-plus picks the smallest path") {
  ChainSpec<double> spec{4, 3, std::vector<double>(3, -1.0), {}};
  for (int t = 0; t < 3; ++t) spec.steps.push_back(std::vector<double>(9, -0.5));
  auto r = evaluate_chain<MaxPlusSemiring>(spec);
  CHECK(r.path == std::vector<int>{0, 0, 0, 0});
  CHECK(r.value == doctest::Approx(-2.5));
  auto tagged = evaluate_chain_tropical(spec);
  REQUIRE(tagged.tag.has_value());
  CHECK(*tagged.tag == 0);
}

TEST_CASE("evaluate_chain: dimension mismatch is a structured error") {
  ChainSpec<double> spec{3, 2, {1, 1}, {std::vector<double>(4, 1.0)}};
  CHECK_THROWS_AS(evaluate_chain<ProbSemiring>(spec), Error);
  spec.steps.push_back(std::vector<double>(3, 1.0));
  CHECK_THROWS_AS(evaluate_chain<ProbSemiring>(spec), Error);
  ChainSpec<double> bad_init{1, 2, {1}, {}};
  CHECK_THROWS_AS(evaluate_chain<MaxPlusSemiring>(bad_init), Error);
}

TEST_CASE("evaluate_chain matches exhaustive path enumeration") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 1 + trial % 3;
    const int n = 1 + trial % 8;
    auto spec = random_chain(rng, k, n);
    double total = 0;
    double best = -INFINITY;
    std::vector<int> best_path;
    oracle::for_each_path(k, n, [&](const std::vector<int>& p) {
      total += path_product(spec, p);
      const double lv = path_log(spec, p);
      if (lv > best) {
        best = lv;
        best_path = p;
      }
    });
    CHECK(evaluate_chain<ProbSemiring>(spec).value == doctest::Approx(total).epsilon(1e-12));
    auto mp = evaluate_chain<MaxPlusSemiring>(log_of(spec));
    CHECK(mp.value == doctest::Approx(best).epsilon(1e-12));
    CHECK(mp.path == best_path);
  }
}

TEST_CASE("2-state, 5-step chain against the 32 paths") {
  std::mt19937_64 rng(5);
  auto spec = random_chain(rng, 2, 5);
  double total = 0;
  oracle::for_each_path(2, 5, [&](const std::vector<int>& p) { total += path_product(spec, p); });
  CHECK(evaluate_chain<ProbSemiring>(spec).value == doctest::Approx(total).epsilon(1e-12));
}

TEST_CASE("semiring laws on random values") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 200; ++i) {
    const double a = u(rng), b = u(rng), c = u(rng);
    using M = MaxPlusSemiring;
    CHECK(M::add(M::add(a, b), c) == M::add(a, M::add(b, c)));
    CHECK(M::mul(a, M::add(b, c)) == doctest::Approx(M::add(M::mul(a, b), M::mul(a, c))));
    CHECK(M::add(a, M::zero()) == a);
    CHECK(M::mul(a, M::one()) == a);
    CHECK(M::mul(a, M::zero()) == M::zero());
    using P = ProbSemiring;
    const double x = std::abs(a), y = std::abs(b), z = std::abs(c);
    CHECK(P::mul(x, P::add(y, z)) == doctest::Approx(P::add(P::mul(x, y), P::mul(x, z))));
    CHECK(P::mul(P::mul(x, y), z) == doctest::Approx(P::mul(x, P::mul(y, z))));
  }
  for (int i = 0; i < 200; ++i) {
    auto a = random_polygon(rng, 1 + i % 6);
    auto b = random_polygon(rng, 1 + (i / 3) % 6);
    auto c = random_polygon(rng, 1 + (i / 7) % 5);
    using G = PolygonSemiring;
    CHECK(G::add(a, b) == G::add(b, a));
    CHECK(G::mul(a, b) == G::mul(b, a));
    CHECK(G::add(G::add(a, b), c) == G::add(a, G::add(b, c)));
    CHECK(G::mul(G::mul(a, b), c) == G::mul(a, G::mul(b, c)));
    CHECK(G::mul(a, G::add(b, c)) == G::add(G::mul(a, b), G::mul(a, c)));
    CHECK(G::add(a, G::zero()) == a);
    CHECK(G::mul(a, G::one()) == a);
    CHECK(G::mul(a, G::zero()).empty());
  }
}

TEST_CASE("polygon_sum examples") {
  auto p = LatticePolygon::point({0, 0});
  auto q = LatticePolygon::point({1, 1});
  auto s = polygon_sum(p, q);
  CHECK(s.vertices() == std::vector<LatticePoint>{{0, 0}, {1, 1}});

  std::mt19937_64 rng(21);
  auto poly = random_polygon(rng, 8);
  CHECK(polygon_sum(poly, poly) == poly);

  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<int> c(-10, 10);
    std::vector<LatticePoint> a, b;
    for (int i = 0; i < 5; ++i) a.push_back({c(rng), c(rng)});
    for (int i = 0; i < 5; ++i) b.push_back({c(rng), c(rng)});
    auto pa = LatticePolygon::hull(a);
    auto pb = LatticePolygon::hull(b);
    CHECK(pa.vertices() == oracle::gift_wrap(a));
    std::vector<LatticePoint> all = a;
    all.insert(all.end(), b.begin(), b.end());
    CHECK(polygon_sum(pa, pb).vertices() == oracle::gift_wrap(all));
  }
}

TEST_CASE("polygon_product examples") {
  std::mt19937_64 rng(8);
  auto poly = random_polygon(rng, 7);
  CHECK(polygon_product(poly, LatticePolygon::point({0, 0})) == poly);

  std::vector<LatticePoint> h{{0, 0}, {1, 0}};
  std::vector<LatticePoint> v{{0, 0}, {0, 1}};
  auto sq = polygon_product(LatticePolygon::hull(h), LatticePolygon::hull(v));
  CHECK(sq.vertices() == std::vector<LatticePoint>{{0, 0}, {1, 0}, {1, 1}, {0, 1}});

  for (int trial = 0; trial < 300; ++trial) {
    auto a = random_polygon(rng, 1 + trial % 9, 8);
    auto b = random_polygon(rng, 1 + (trial / 9) % 9, 8);
    std::vector<LatticePoint> sums;
    for (auto p : a.vertices())
      for (auto q : b.vertices()) sums.push_back(p + q);
    CHECK(polygon_product(a, b).vertices() == oracle::gift_wrap(sums));
  }
}

TEST_CASE("canonical form drops collinear points and starts at the smallest vertex") {
  std::vector<LatticePoint> pts{{2, 2}, {0, 0}, {1, 1}, {2, 0}, {1, 0}, {0, 2}, {0, 1}};
  auto p = LatticePolygon::hull(pts);
  CHECK(p.vertices() == std::vector<LatticePoint>{{0, 0}, {2, 0}, {2, 2}, {0, 2}});
  std::vector<LatticePoint> line{{3, 3}, {1, 1}, {2, 2}};
  CHECK(LatticePolygon::hull(line).vertices() == std::vector<LatticePoint>{{1, 1}, {3, 3}});
}

TEST_CASE("witnesses: concatenate under product, smallest wins under sum") {
  auto a = LatticePolygon::point({0, 0}, "D");
  auto b = LatticePolygon::point({0, 0}, "I");
  CHECK(polygon_sum(b, a).witnesses() == std::vector<std::string>{"D"});
  auto c = polygon_product(LatticePolygon::point({1, 0}, "M"), a);
  CHECK(c.witnesses() == std::vector<std::string>{"MD"});
}
