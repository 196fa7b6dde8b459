#pragma once

// Jukes-Cantor substitution model: rate and substitution matrices, branch
// lengths, pattern probabilities on trees, the three-leaf Fourier invariant,
// distance correction and simulation.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "phylokit/tree.hpp"

namespace phylokit {

// Row-major 4x4 over A, C, G, T.
using Matrix4 = std::array<double, 16>;

Matrix4 identity4();
Matrix4 multiply(const Matrix4& a, const Matrix4& b);
double determinant(const Matrix4& a);
// Entries >= -tol and rows summing to 1 within tol.
bool is_row_stochastic(const Matrix4& p, double tol = 1e-9);

struct RateMatrix {
  Matrix4 q{};

  // Off-diagonal entries >= 0, rows summing to 0 (±1e-12), no zero rows.
  void validate() const;
  static RateMatrix jukes_cantor(double alpha);
};

// e^A by scaling and squaring of the truncated Taylor series.
Matrix4 matrix_exponential(const Matrix4& a);
// e^{Qt} for a general rate matrix (not validated, so invalid Q can be probed).
Matrix4 substitution_matrix(const RateMatrix& q, double t);
// Closed-form Jukes-Cantor P(t) with rate alpha.
Matrix4 substitution_matrix(double alpha, double t);

// -1/4 log det P.
double branch_length_of(const Matrix4& p);

struct JcEdge {
  double theta = 1;
  double pi = 0;

  Matrix4 matrix() const;
};

// pi = (1 - e^{-4b/3}) / 4, theta = 1 - 3 pi.
JcEdge edge_params_from_length(double b);

// Probability of the leaf pattern (nucleotide index per leaf, in
// tree.leaves() order) under a uniform root and Jukes-Cantor edges.
double pattern_probability(const PhyloTree& tree, const std::vector<int>& pattern);
double pattern_probability_by_name(const PhyloTree& tree,
                                  const std::map<std::string, char>& pattern);

struct AllSame {
  double single_letter = 0;  // p_{AA...A}
  double any_letter = 0;     // 4 p_{AA...A}
};

AllSame all_same_probability(const PhyloTree& tree);

struct ClawFourier {
  double q111 = 0, q110 = 0, q101 = 0, q011 = 0, q000 = 0;
  double residual = 0;  // q000 q111^2 - q011 q101 q110
};

// Linear change of coordinates on the five distinct pattern classes of the
// three-leaf claw: all equal, all distinct, and only leaves (1,2), (1,3) or
// (2,3) agreeing.
ClawFourier claw_fourier_invariant(double p123, double pdis, double p12, double p13,
                                   double p23);

// -3/4 log(1 - 4k/(3n)); throws Error when 4k >= 3n.
double jc_distance(std::int64_t n, std::int64_t k);

// Uniform root sites evolved down each edge; deterministic in seed and
// independent of traversal order.
std::map<std::string, std::string> simulate_leaf_sequences(const PhyloTree& tree,
                                                           std::size_t length,
                                                           std::uint64_t seed);

}  // namespace phylokit
