#include "phylokit/evolution.hpp"

#include <algorithm>
#include <cmath>

#include "phylokit/error.hpp"
#include "phylokit/nucleotide.hpp"

namespace phylokit {

Matrix4 identity4() {
  Matrix4 m{};
  for (int i = 0; i < 4; ++i) m[i * 5] = 1.0;
  return m;
}

Matrix4 multiply(const Matrix4& a, const Matrix4& b) {
  Matrix4 c{};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < 4; ++j) c[i * 4 + j] += a[i * 4 + k] * b[k * 4 + j];
  return c;
}

double determinant(const Matrix4& a) {
  // Gaussian elimination with partial pivoting.
  Matrix4 m = a;
  double det = 1;
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(m[r * 4 + col]) > std::abs(m[piv * 4 + col])) piv = r;
    if (m[piv * 4 + col] == 0) return 0;
    if (piv != col) {
      for (int c = 0; c < 4; ++c) std::swap(m[piv * 4 + c], m[col * 4 + c]);
      det = -det;
    }
    det *= m[col * 4 + col];
    for (int r = col + 1; r < 4; ++r) {
      const double f = m[r * 4 + col] / m[col * 4 + col];
      for (int c = col; c < 4; ++c) m[r * 4 + c] -= f * m[col * 4 + c];
    }
  }
  return det;
}

bool is_row_stochastic(const Matrix4& p, double tol) {
  for (int i = 0; i < 4; ++i) {
    double sum = 0;
    for (int j = 0; j < 4; ++j) {
      if (p[i * 4 + j] < -tol) return false;
      sum += p[i * 4 + j];
    }
    if (std::abs(sum - 1) > tol) return false;
  }
  return true;
}

void RateMatrix::validate() const {
  for (int i = 0; i < 4; ++i) {
    double sum = 0;
    bool zero_row = true;
    for (int j = 0; j < 4; ++j) {
      const double v = q[i * 4 + j];
      if (!std::isfinite(v)) throw Error("rate matrix: non-finite entry");
      if (i != j && v < 0) throw Error("rate matrix: negative off-diagonal entry");
      if (v != 0) zero_row = false;
      sum += v;
    }
    if (zero_row) throw Error("rate matrix: row " + std::to_string(i) + " is zero");
    if (std::abs(sum) > 1e-12) throw Error("rate matrix: row " + std::to_string(i) + " does not sum to 0");
  }
}

RateMatrix RateMatrix::jukes_cantor(double alpha) {
  RateMatrix r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r.q[i * 4 + j] = i == j ? -3 * alpha : alpha;
  return r;
}

Matrix4 matrix_exponential(const Matrix4& a) {
  double norm = 0;
  for (int i = 0; i < 4; ++i) {
    double row = 0;
    for (int j = 0; j < 4; ++j) row += std::abs(a[i * 4 + j]);
    norm = std::max(norm, row);
  }
  int squarings = 0;
  while (norm > 0.5) {
    norm /= 2;
    ++squarings;
  }
  Matrix4 scaled = a;
  const double f = std::ldexp(1.0, -squarings);
  for (double& v : scaled) v *= f;

  Matrix4 result = identity4();
  Matrix4 term = identity4();
  for (int k = 1; k < 60; ++k) {
    term = multiply(term, scaled);
    double biggest = 0;
    for (double& v : term) {
      v /= k;
      biggest = std::max(biggest, std::abs(v));
    }
    for (int i = 0; i < 16; ++i) result[i] += term[i];
    if (biggest < 1e-17) break;  // below rounding of the O(1) entries
  }
  for (int s = 0; s < squarings; ++s) result = multiply(result, result);
  return result;
}

Matrix4 substitution_matrix(const RateMatrix& q, double t) {
  if (!(t >= 0)) throw Error("substitution matrix: time must be non-negative");
  Matrix4 qt = q.q;
  for (double& v : qt) v *= t;
  return matrix_exponential(qt);
}

Matrix4 substitution_matrix(double alpha, double t) {
  if (!(alpha >= 0) || !(t >= 0)) {
    throw Error("substitution matrix: rate and time must be non-negative");
  }
  const double e = std::exp(-4 * alpha * t);
  const double diag = (1 + 3 * e) / 4;
  const double off = (1 - e) / 4;
  Matrix4 p;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) p[i * 4 + j] = i == j ? diag : off;
  return p;
}

double branch_length_of(const Matrix4& p) {
  if (!is_row_stochastic(p)) throw Error("branch length: matrix is not row-stochastic");
  const double det = determinant(p);
  if (!(det > 0)) throw Error("branch length: determinant is not positive (saturated matrix)");
  return -0.25 * std::log(det);
}

Matrix4 JcEdge::matrix() const {
  Matrix4 p;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) p[i * 4 + j] = i == j ? theta : pi;
  return p;
}

JcEdge edge_params_from_length(double b) {
  if (!(b >= 0)) throw Error("edge parameters: branch length must be non-negative");
  const double pi = -0.25 * std::expm1(-4 * b / 3);
  return {1 - 3 * pi, pi};
}

double pattern_probability(const PhyloTree& tree, const std::vector<int>& pattern) {
  tree.validate();
  const auto leaves = tree.leaves();
  if (pattern.size() != leaves.size()) {
    throw Error("pattern: expected " + std::to_string(leaves.size()) + " leaf states, got " +
                std::to_string(pattern.size()));
  }
  std::vector<std::array<double, 4>> partial(tree.size());
  std::vector<int> leaf_slot(tree.size(), -1);
  for (std::size_t i = 0; i < leaves.size(); ++i) leaf_slot[leaves[i]] = static_cast<int>(i);
  const auto order = tree.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    const auto& node = tree.node(v);
    auto& like = partial[v];
    if (node.is_leaf()) {
      const int s = pattern[leaf_slot[v]];
      if (s < 0 || s > 3) throw Error("pattern: leaf '" + node.name + "' has no nucleotide");
      like = {0, 0, 0, 0};
      like[s] = 1;
      continue;
    }
    like = {1, 1, 1, 1};
    for (int c : node.children) {
      const JcEdge e = edge_params_from_length(tree.node(c).length);
      const auto& below = partial[c];
      const double total = below[0] + below[1] + below[2] + below[3];
      for (int x = 0; x < 4; ++x) {
        // theta * below[x] + pi * (sum of the other three)
        like[x] *= e.theta * below[x] + e.pi * (total - below[x]);
      }
    }
  }
  const auto& r = partial[tree.root()];
  return 0.25 * (r[0] + r[1] + r[2] + r[3]);
}

double pattern_probability_by_name(const PhyloTree& tree,
                                  const std::map<std::string, char>& pattern) {
  std::vector<int> states;
  for (int leaf : tree.leaves()) {
    const auto& name = tree.node(leaf).name;
    auto it = pattern.find(name);
    if (it == pattern.end()) throw Error("pattern: no nucleotide for leaf '" + name + "'");
    const int s = nucleotide_index(it->second);
    if (s < 0) throw Error("pattern: invalid nucleotide for leaf '" + name + "'");
    states.push_back(s);
  }
  return pattern_probability(tree, states);
}

AllSame all_same_probability(const PhyloTree& tree) {
  const double p = pattern_probability(tree, std::vector<int>(tree.leaves().size(), 0));
  return {p, 4 * p};
}

ClawFourier claw_fourier_invariant(double p123, double pdis, double p12, double p13,
                                   double p23) {
  constexpr double third = 1.0 / 3.0;
  ClawFourier f;
  f.q111 = p123 + third * pdis - third * p12 - third * p13 - third * p23;
  f.q110 = p123 - third * pdis + p12 - third * p13 - third * p23;
  f.q101 = p123 - third * pdis - third * p12 + p13 - third * p23;
  f.q011 = p123 - third * pdis - third * p12 - third * p13 + p23;
  f.q000 = p123 + pdis + p12 + p13 + p23;
  f.residual = f.q000 * f.q111 * f.q111 - f.q011 * f.q101 * f.q110;
  return f;
}

double jc_distance(std::int64_t n, std::int64_t k) {
  if (n < 1) throw Error("jc distance: site count must be positive");
  if (k < 0 || k > n) throw Error("jc distance: difference count out of range");
  if (4 * k >= 3 * n) {
    throw Error("jc distance: saturated (" + std::to_string(k) + " differences in " +
                std::to_string(n) + " sites)");
  }
  return -0.75 * std::log1p(-4.0 * static_cast<double>(k) / (3.0 * static_cast<double>(n)));
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform [0, 1) keyed by (seed, stream, site).
double keyed_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t site) {
  const std::uint64_t h = splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ site);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace

std::map<std::string, std::string> simulate_leaf_sequences(const PhyloTree& tree,
                                                           std::size_t length,
                                                           std::uint64_t seed) {
  tree.validate();
  if (length < 1) throw Error("simulate: length must be positive");
  std::vector<std::string> seq(tree.size());
  std::string& root = seq[tree.root()];
  for (std::size_t s = 0; s < length; ++s) {
    root += kNucleotides[static_cast<int>(keyed_uniform(seed, 0, s) * 4)];
  }
  for (int v : tree.preorder()) {
    if (v == tree.root()) continue;
    const JcEdge e = edge_params_from_length(tree.node(v).length);
    const std::string& up = seq[tree.node(v).parent];
    std::string& out = seq[v];
    out.resize(length);
    for (std::size_t s = 0; s < length; ++s) {
      // Keep the parent letter with probability theta, otherwise one of the
      // three others with probability pi each.
      const double u = keyed_uniform(seed, static_cast<std::uint64_t>(v) + 1, s);
      const int from = nucleotide_index(up[s]);
      int to = from;
      if (u >= e.theta) {
        const int shift = std::min(2, static_cast<int>((u - e.theta) / e.pi));
        to = (from + 1 + shift) % 4;
      }
      out[s] = kNucleotides[to];
    }
  }
  std::map<std::string, std::string> result;
  for (int leaf : tree.leaves()) result[tree.node(leaf).name] = seq[leaf];
  return result;
}

}  // namespace phylokit
