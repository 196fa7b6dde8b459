#include "phylokit/treespace.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include <Eigen/Dense>

#include "phylokit/error.hpp"
#include "phylokit/kernels.hpp"

namespace phylokit {
namespace {

constexpr double kSlack = 1e-9;

std::string triple_text(const std::vector<std::string>& taxa, std::initializer_list<int> idx) {
  std::string s = "(";
  for (int i : idx) {
    if (s.size() > 1) s += ", ";
    s += taxa[i];
  }
  return s + ")";
}

// Agglomerated tree under construction: node 0..n-1 are the taxa.
struct Agglomeration {
  std::vector<std::string> names;
  std::vector<std::vector<int>> children;
  std::vector<double> length;  // edge to parent
  std::vector<std::string> key;  // smallest leaf label below

  int add_leaf(const std::string& name) {
    names.push_back(name);
    children.emplace_back();
    length.push_back(0);
    key.push_back(name);
    return static_cast<int>(names.size()) - 1;
  }
  int join(std::vector<int> kids) {
    std::sort(kids.begin(), kids.end(), [&](int a, int b) { return key[a] < key[b]; });
    names.emplace_back();
    key.push_back(key[kids.front()]);
    children.push_back(std::move(kids));
    length.push_back(0);
    return static_cast<int>(names.size()) - 1;
  }
  PhyloTree build(int root) const {
    PhyloTree t;
    t.add_root();
    std::vector<std::pair<int, int>> stack;  // (agglomeration node, tree parent)
    for (auto it = children[root].rbegin(); it != children[root].rend(); ++it) {
      stack.push_back({*it, 0});
    }
    while (!stack.empty()) {
      auto [v, parent] = stack.back();
      stack.pop_back();
      const int id = t.add_child(parent, length[v], names[v]);
      for (auto it = children[v].rbegin(); it != children[v].rend(); ++it) {
        stack.push_back({*it, id});
      }
    }
    return t;
  }
};

// Indices of taxa sorted by label.
std::vector<int> label_order(const std::vector<std::string>& taxa) {
  std::vector<int> order(taxa.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return taxa[a] < taxa[b]; });
  return order;
}

// Calls visit(tuple) for every increasing k-tuple of [0, n) in lexicographic
// order.
template <class F>
void for_each_subset(int n, int k, F&& visit) {
  if (k > n || k < 0) return;
  std::vector<int> c(k);
  std::iota(c.begin(), c.end(), 0);
  while (true) {
    visit(std::span<const int>(c));
    int i = k - 1;
    while (i >= 0 && c[i] == n - k + i) --i;
    if (i < 0) return;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

// Below-count of each tree node for a set of leaves (by node id).
std::vector<int> below_counts(const PhyloTree& tree, const std::vector<int>& order,
                              std::span<const int> leaf_nodes) {
  std::vector<int> cnt(tree.size(), 0);
  for (int v : leaf_nodes) cnt[v] = 1;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (*it != tree.root()) cnt[tree.node(*it).parent] += cnt[*it];
  }
  return cnt;
}

}  // namespace

void DissimilarityMap::validate() const {
  const std::size_t k = n();
  if (d.size() != k * k) throw Error("dissimilarity: table is not n x n");
  std::set<std::string> seen(taxa.begin(), taxa.end());
  if (seen.size() != k) throw Error("dissimilarity: duplicate taxon labels");
  for (std::size_t i = 0; i < k; ++i) {
    if (at(i, i) != 0) throw Error("dissimilarity: non-zero diagonal at " + taxa[i]);
    for (std::size_t j = 0; j < k; ++j) {
      if (!std::isfinite(at(i, j))) {
        throw Error("dissimilarity: non-finite entry (" + taxa[i] + ", " + taxa[j] + ")");
      }
      if (std::abs(at(i, j) - at(j, i)) > 1e-9) {
        throw Error("dissimilarity: asymmetric entry (" + taxa[i] + ", " + taxa[j] + ")");
      }
    }
  }
}

Verdict check_metric(const DissimilarityMap& delta) {
  delta.validate();
  const int n = static_cast<int>(delta.n());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (delta.at(i, j) < 0) {
        return {false, {i, j}, "negative entry " + triple_text(delta.taxa, {i, j}), false};
      }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        if (x == y || y == z || x == z) continue;
        const double lhs = delta.at(x, z);
        const double rhs = delta.at(x, y) + delta.at(y, z);
        if (lhs > rhs + kSlack * std::max(1.0, std::abs(rhs))) {
          return {false, {x, y, z},
                  "triangle inequality fails for " + triple_text(delta.taxa, {x, y, z}), false};
        }
      }
  return {};
}

Verdict check_four_point(const DissimilarityMap& delta) {
  delta.validate();
  const int n = static_cast<int>(delta.n());
  Verdict v;
  v.vacuous = n < 4;
  for_each_subset(n, 4, [&](std::span<const int> q) {
    if (!v.ok) return;
    const int a = q[0], b = q[1], c = q[2], e = q[3];
    double s[3] = {delta.at(a, b) + delta.at(c, e), delta.at(a, c) + delta.at(b, e),
                   delta.at(a, e) + delta.at(b, c)};
    std::sort(s, s + 3);
    // The two largest pairings must agree.
    if (s[2] - s[1] > kSlack * std::max(1.0, std::abs(s[2]))) {
      v = {false, {a, b, c, e}, "four-point condition fails for " + triple_text(delta.taxa, {a, b, c, e}),
           false};
    }
  });
  return v;
}

DissimilarityMap tree_metric(const PhyloTree& tree) {
  tree.validate();
  return {tree.leaf_names(), tree.leaf_distances()};
}

Split make_split(std::vector<std::string> a, std::vector<std::string> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a.empty() || b.empty()) throw Error("split: both sides must be non-empty");
  if (b.front() < a.front()) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

TreeSplits splits_of_tree(const PhyloTree& tree) {
  tree.validate();
  const auto order = tree.preorder();
  std::vector<std::vector<std::string>> below(tree.size());
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    if (tree.node(v).is_leaf()) below[v].push_back(tree.node(v).name);
    if (v != tree.root()) {
      auto& up = below[tree.node(v).parent];
      up.insert(up.end(), below[v].begin(), below[v].end());
    }
  }
  const auto all = tree.leaf_names();
  const std::set<std::string> universe(all.begin(), all.end());
  std::map<Split, double> found;
  for (int v = 1; v < tree.size(); ++v) {
    std::set<std::string> inside(below[v].begin(), below[v].end());
    std::vector<std::string> rest;
    for (const auto& name : universe)
      if (!inside.count(name)) rest.push_back(name);
    if (rest.empty()) continue;
    found[make_split(below[v], rest)] += tree.node(v).length;
  }
  TreeSplits out;
  for (const auto& [s, len] : found) {
    out.splits.push_back(s);
    out.lengths.push_back(len);
  }
  out.binary = out.splits.size() == 2 * all.size() - 3;
  return out;
}

bool splits_compatible(const Split& a, const Split& b) {
  std::vector<std::string> ua = a.side, ub = b.side;
  ua.insert(ua.end(), a.other.begin(), a.other.end());
  ub.insert(ub.end(), b.other.begin(), b.other.end());
  std::sort(ua.begin(), ua.end());
  std::sort(ub.begin(), ub.end());
  if (ua != ub) throw Error("split: splits are over different taxon sets");
  auto meets = [](const std::vector<std::string>& x, const std::vector<std::string>& y) {
    std::vector<std::string> out;
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
    return !out.empty();
  };
  return !(meets(a.side, b.side) && meets(a.side, b.other) && meets(a.other, b.side) &&
           meets(a.other, b.other));
}

std::vector<double> nj_q_table(const DissimilarityMap& delta) {
  delta.validate();
  const std::size_t n = delta.n();
  const auto& kern = kernels::active();
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = kern.sum(std::span<const double>(delta.d.data() + i * n, n));
  std::vector<double> q(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double v = static_cast<double>(n - 2) * delta.at(i, j);
      v = v - r[i];
      q[i * n + j] = v - r[j];
    }
  return q;
}

NjResult neighbor_join(const DissimilarityMap& delta) {
  delta.validate();
  const std::size_t n = delta.n();
  if (n < 3) throw Error("neighbor joining needs at least 3 taxa");
  const auto& kern = kernels::active();

  // Active nodes kept sorted by their smallest leaf label: a joined node takes
  // the slot of its first member, so slot order stays lexicographic and the
  // first minimum in row-major order is the lexicographically first pair.
  const auto order = label_order(delta.taxa);
  Agglomeration agg;
  std::vector<int> node;
  for (int t : order) node.push_back(agg.add_leaf(delta.taxa[t]));
  std::size_t k = n;
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = delta.at(order[i], order[j]);

  NjResult res;
  auto set_length = [&](int v, double len) {
    if (len < 0) {
      len = 0;
      res.clamped = true;
    }
    agg.length[v] = len;
  };

  std::vector<double> r(n);
  while (k > 3) {
    for (std::size_t i = 0; i < k; ++i) r[i] = kern.sum(std::span<const double>(dist.data() + i * n, k));
    const double scale = static_cast<double>(k - 2);
    kernels::RowMin best{0, 0};
    std::size_t bi = 0;
    bool have = false;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      auto m = kern.q_row_min(std::span<const double>(dist.data() + i * n, k),
                              std::span<const double>(r.data(), k), scale, r[i], i + 1);
      if (!have || m.value < best.value) {
        best = m;
        bi = i;
        have = true;
      }
    }
    const std::size_t x = bi, y = best.index;
    const double dxy = dist[x * n + y];
    const double lx = 0.5 * dxy + (r[x] - r[y]) / (2 * scale);
    set_length(node[x], lx);
    set_length(node[y], dxy - lx);
    res.joins.emplace_back(agg.key[node[x]], agg.key[node[y]]);
    const int z = agg.join({node[x], node[y]});
    for (std::size_t m = 0; m < k; ++m) {
      if (m == x || m == y) continue;
      const double v = 0.5 * (dist[x * n + m] + dist[y * n + m] - dxy);
      dist[x * n + m] = dist[m * n + x] = v;
    }
    node[x] = z;
    // Drop slot y.
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = y; j + 1 < k; ++j) dist[i * n + j] = dist[i * n + j + 1];
    }
    for (std::size_t i = y; i + 1 < k; ++i) {
      for (std::size_t j = 0; j + 1 < k; ++j) dist[i * n + j] = dist[(i + 1) * n + j];
    }
    node.erase(node.begin() + static_cast<std::ptrdiff_t>(y));
    --k;
  }
  const double d01 = dist[1], d02 = dist[2], d12 = dist[n + 2];
  set_length(node[0], 0.5 * (d01 + d02 - d12));
  set_length(node[1], 0.5 * (d01 + d12 - d02));
  set_length(node[2], 0.5 * (d02 + d12 - d01));
  const int root = agg.join({node[0], node[1], node[2]});
  res.tree = agg.build(root);
  return res;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::size_t subset_rank(std::span<const int> sorted) {
  std::size_t r = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) r += binomial(sorted[i], i + 1);
  return r;
}

void MDissimilarityMap::validate() const {
  if (m < 2 || static_cast<std::size_t>(m) > n()) {
    throw Error("m-dissimilarity: m must lie in [2, n]");
  }
  if (values.size() != binomial(n(), m)) {
    throw Error("m-dissimilarity: expected " + std::to_string(binomial(n(), m)) + " values");
  }
  for (double v : values)
    if (!std::isfinite(v)) throw Error("m-dissimilarity: non-finite value");
  std::set<std::string> seen(taxa.begin(), taxa.end());
  if (seen.size() != n()) throw Error("m-dissimilarity: duplicate taxon labels");
}

double MDissimilarityMap::at(std::span<const int> tuple) const {
  std::vector<int> s(tuple.begin(), tuple.end());
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) return 0.0;
  return values[subset_rank(s)];
}

double& MDissimilarityMap::at_sorted(std::span<const int> sorted) { return values[subset_rank(sorted)]; }

MDissimilarityMap m_dissimilarity(const PhyloTree& tree, int m) {
  tree.validate();
  const auto leaves = tree.leaves();
  const int n = static_cast<int>(leaves.size());
  if (m < 2 || m > n) throw Error("m-dissimilarity: m must lie in [2, n]");
  MDissimilarityMap out{tree.leaf_names(), m, std::vector<double>(binomial(n, m))};
  const auto order = tree.preorder();
  std::vector<int> chosen(m);
  for_each_subset(n, m, [&](std::span<const int> s) {
    for (int i = 0; i < m; ++i) chosen[i] = leaves[s[i]];
    const auto cnt = below_counts(tree, order, chosen);
    double total = 0;
    for (int v = 1; v < tree.size(); ++v)
      if (cnt[v] > 0 && cnt[v] < m) total += tree.node(v).length;
    out.at_sorted(s) = total;
  });
  return out;
}

namespace {

// Per-pair and per-taxon subset sums of an m-dissimilarity map:
// pair[i][j] = sum over subsets containing i and j, single[i] = over those
// containing i.
void subset_sums(const MDissimilarityMap& delta, std::vector<double>& pair,
                 std::vector<double>& single) {
  const int n = static_cast<int>(delta.n());
  pair.assign(static_cast<std::size_t>(n) * n, 0.0);
  single.assign(n, 0.0);
  for_each_subset(n, delta.m, [&](std::span<const int> s) {
    const double v = delta.values[subset_rank(s)];
    for (std::size_t a = 0; a < s.size(); ++a) {
      single[s[a]] += v;
      for (std::size_t b = a + 1; b < s.size(); ++b) {
        pair[s[a] * n + s[b]] += v;
        pair[s[b] * n + s[a]] += v;
      }
    }
  });
}

}  // namespace

CherryPick generalized_nj_cherry(const MDissimilarityMap& delta) {
  delta.validate();
  const int n = static_cast<int>(delta.n());
  if (n <= delta.m) throw Error("cherry picking needs more taxa than m");
  std::vector<double> pair, single;
  subset_sums(delta, pair, single);
  const double coef = static_cast<double>(n - 2) / static_cast<double>(delta.m - 1);
  CherryPick out;
  out.q.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) out.q[i * n + j] = coef * pair[i * n + j] - single[i] - single[j];
  const auto order = label_order(delta.taxa);
  bool have = false;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const int i = order[a], j = order[b];
      if (!have || out.q[i * n + j] < out.q[out.i * n + out.j]) {
        out.i = i;
        out.j = j;
        have = true;
      }
    }
  return out;
}

namespace {

// Minimum-norm least-squares edge lengths of `tree` against every 3-subset
// value; returns the residual norm. With pendant_only the internal edges are
// held at 0.
double fit_three_lengths(PhyloTree& tree, const MDissimilarityMap& delta, bool& clamped,
                         bool pendant_only = false) {
  const int n = static_cast<int>(delta.n());
  std::map<std::string, int> leaf_of;
  for (int v : tree.leaves()) leaf_of[tree.node(v).name] = v;
  const auto pre = tree.preorder();
  const int edges = tree.size() - 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(delta.values.size()), edges);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(delta.values.size()));
  Eigen::Index row = 0;
  for_each_subset(n, 3, [&](std::span<const int> s) {
    const std::vector<int> chosen{leaf_of.at(delta.taxa[s[0]]), leaf_of.at(delta.taxa[s[1]]),
                                  leaf_of.at(delta.taxa[s[2]])};
    const auto cnt = below_counts(tree, pre, chosen);
    for (int v = 1; v < tree.size(); ++v)
      if (cnt[v] > 0 && cnt[v] < 3 && (!pendant_only || tree.node(v).is_leaf())) a(row, v - 1) = 1.0;
    rhs(row) = delta.values[subset_rank(s)];
    ++row;
  });
  const Eigen::VectorXd len = a.completeOrthogonalDecomposition().solve(rhs);
  const double residual = (a * len - rhs).norm();
  for (int v = 1; v < tree.size(); ++v) {
    double l = len(v - 1);
    if (l < 0) {
      l = 0;
      clamped = true;
    }
    tree.set_length(v, l);
  }
  return residual;
}

}  // namespace

GeneralizedNjResult generalized_neighbor_join(const MDissimilarityMap& delta) {
  delta.validate();
  if (delta.m != 3) throw Error("generalized neighbor joining supports m = 3 only");
  const int n = static_cast<int>(delta.n());
  if (n < 4) throw Error("generalized neighbor joining needs at least 4 taxa");

  const auto order = label_order(delta.taxa);
  Agglomeration agg;
  std::vector<int> node;
  for (int t : order) node.push_back(agg.add_leaf(delta.taxa[t]));
  // Dense symmetric cube over active slots.
  const std::size_t N = n;
  std::vector<double> cube(N * N * N, 0.0);
  auto c = [&](std::size_t i, std::size_t j, std::size_t l) -> double& { return cube[(i * N + j) * N + l]; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const int t[3] = {order[i], order[j], order[l]};
        c(i, j, l) = delta.at(t);
      }

  GeneralizedNjResult res;
  std::size_t k = N;
  std::vector<double> pair(N * N), single(N);
  // Three-subset values on four nodes cannot tell the quartets apart, so past
  // n = 4 the last join is settled by fitting against the full input.
  const std::size_t stop = n == 4 ? 3 : 4;
  while (k > stop) {
    std::fill(pair.begin(), pair.end(), 0.0);
    std::fill(single.begin(), single.end(), 0.0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        for (std::size_t l = j + 1; l < k; ++l) {
          const double v = c(i, j, l);
          single[i] += v, single[j] += v, single[l] += v;
          pair[i * N + j] += v, pair[i * N + l] += v, pair[j * N + l] += v;
        }
    const double coef = static_cast<double>(k - 2) / 2.0;
    std::size_t x = 0, y = 1;
    double best = 0;
    bool have = false;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) {
        const double q = coef * pair[i * N + j] - single[i] - single[j];
        if (!have || q < best) best = q, x = i, y = j, have = true;
      }
    res.joins.emplace_back(agg.key[node[x]], agg.key[node[y]]);
    const int z = agg.join({node[x], node[y]});
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        if (i == x || i == y || j == x || j == y || i == j) continue;
        const double v = 0.5 * (c(x, i, j) + c(y, i, j));
        c(x, i, j) = c(i, x, j) = c(i, j, x) = v;
      }
    node[x] = z;
    // Drop slot y by shifting the cube.
    std::vector<double> next(N * N * N, 0.0);
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < k; ++i)
      if (i != y) keep.push_back(i);
    for (std::size_t a = 0; a < keep.size(); ++a)
      for (std::size_t b = 0; b < keep.size(); ++b)
        for (std::size_t e = 0; e < keep.size(); ++e) next[(a * N + b) * N + e] = c(keep[a], keep[b], keep[e]);
    cube.swap(next);
    node.erase(node.begin() + static_cast<std::ptrdiff_t>(y));
    --k;
  }

  if (k == 3) {
    // Only n = 4 gets here. Its internal edge is not identifiable; holding it
    // at 0 leaves the pendants as large as any exact fit allows.
    res.tree = agg.build(agg.join({node[0], node[1], node[2]}));
    fit_three_lengths(res.tree, delta, res.clamped, true);
    return res;
  }
  // Quartet resolutions in lexicographic order of the first pair.
  constexpr int kPairings[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
  double best = 0;
  for (const auto& p : kPairings) {
    Agglomeration trial = agg;
    const int z = trial.join({node[p[0]], node[p[1]]});
    PhyloTree tree = trial.build(trial.join({z, node[p[2]], node[p[3]]}));
    bool clamped = false;
    const double r = fit_three_lengths(tree, delta, clamped);
    if (res.joins.size() == static_cast<std::size_t>(n - 4) || r < best - 1e-9 * std::max(1.0, best)) {
      if (res.joins.size() > static_cast<std::size_t>(n - 4)) res.joins.pop_back();
      res.joins.emplace_back(trial.key[node[p[0]]], trial.key[node[p[1]]]);
      res.tree = std::move(tree);
      res.clamped = clamped;
      best = r;
    }
  }
  return res;
}

Verdict check_m_tree(const MDissimilarityMap& delta) {
  delta.validate();
  const int n = static_cast<int>(delta.n());
  const int m = delta.m;
  Verdict v;
  if (n < m + 2) {
    v.vacuous = true;
    v.message = "fewer than m + 2 taxa: nothing to check";
    return v;
  }
  std::vector<int> tuple(m);
  auto value = [&](std::span<const int> y, int i, int j) {
    std::copy(y.begin(), y.end(), tuple.begin());
    tuple[m - 2] = i;
    tuple[m - 1] = j;
    return delta.at(tuple);
  };
  for_each_subset(n, m - 2, [&](std::span<const int> y) {
    if (!v.ok) return;
    std::vector<int> rest;
    for (int i = 0; i < n; ++i)
      if (!std::binary_search(y.begin(), y.end(), i)) rest.push_back(i);
    std::vector<int> ys(y.begin(), y.end());
    const int r = static_cast<int>(rest.size());
    for (int a = 0; a < r && v.ok; ++a)
      for (int b = a + 1; b < r; ++b)
        if (value(y, rest[a], rest[b]) < 0) {
          v.ok = false;
          v.witness = ys;
          v.witness.push_back(rest[a]);
          v.witness.push_back(rest[b]);
          v.message = "negative value";
          break;
        }
    for_each_subset(r, 4, [&](std::span<const int> q) {
      if (!v.ok) return;
      const int i = rest[q[0]], j = rest[q[1]], k = rest[q[2]], l = rest[q[3]];
      double s[3] = {value(y, i, j) + value(y, k, l), value(y, i, k) + value(y, j, l),
                     value(y, i, l) + value(y, j, k)};
      std::sort(s, s + 3);
      if (s[2] - s[1] > kSlack * std::max(1.0, std::abs(s[2]))) {
        v.ok = false;
        v.witness = ys;
        v.witness.insert(v.witness.end(), {i, j, k, l});
        v.message = "four-point condition fails";
      }
    });
  });
  return v;
}

std::array<double, 5> gr36_residuals(const MDissimilarityMap& delta) {
  delta.validate();
  if (delta.n() != 6 || delta.m != 3) throw Error("gr36: needs a 3-dissimilarity map on 6 taxa");
  auto d = [&](int a, int b, int c) {
    const int t[3] = {a - 1, b - 1, c - 1};
    return delta.at(t);
  };
  return {
      d(1, 2, 3) + d(1, 4, 5) + d(2, 4, 6) + d(3, 5, 6) - (d(1, 2, 4) + d(1, 3, 5) + d(2, 3, 6) + d(4, 5, 6)),
      d(1, 2, 3) + d(1, 4, 5) + d(3, 4, 6) + d(2, 5, 6) - (d(1, 3, 4) + d(1, 2, 5) + d(2, 3, 6) + d(4, 5, 6)),
      d(1, 2, 3) + d(2, 4, 5) + d(1, 4, 6) + d(3, 5, 6) - (d(1, 2, 4) + d(2, 3, 5) + d(1, 3, 6) + d(4, 5, 6)),
      d(1, 2, 3) + d(3, 4, 5) + d(2, 4, 6) + d(1, 5, 6) - (d(2, 3, 4) + d(1, 3, 5) + d(1, 2, 6) + d(4, 5, 6)),
      d(1, 2, 3) + d(3, 4, 5) + d(1, 4, 6) + d(2, 5, 6) - (d(1, 3, 4) + d(2, 3, 5) + d(1, 2, 6) + d(4, 5, 6)),
  };
}

BigInt schroder_count(int n) {
  if (n < 3) throw Error("schroder count: n must be at least 3");
  BigInt r = 1;
  for (int k = 3; k <= 2 * n - 5; k += 2) r *= k;
  return r;
}

}  // namespace phylokit
