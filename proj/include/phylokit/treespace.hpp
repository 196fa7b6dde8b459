#pragma once

// Dissimilarity maps, tree metrics, splits and (generalized) neighbor joining.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phylokit/pairhmm.hpp"  // BigInt
#include "phylokit/tree.hpp"

namespace phylokit {

struct DissimilarityMap {
  std::vector<std::string> taxa;
  std::vector<double> d;  // n x n row-major

  std::size_t n() const { return taxa.size(); }
  double at(std::size_t i, std::size_t j) const { return d[i * taxa.size() + j]; }

  // Throws Error on shape mismatch, non-finite entries, asymmetry beyond
  // 1e-9, a non-zero diagonal or duplicate taxon labels.
  void validate() const;
};

// Outcome of a membership check; witness holds taxon indices of the first
// violation in the check's enumeration order.
struct Verdict {
  bool ok = true;
  std::vector<int> witness;
  std::string message;
  // Set when the check had nothing to test (too few taxa).
  bool vacuous = false;
};

// Non-negativity and the triangle inequality d(x,z) <= d(x,y) + d(y,z) over
// ordered distinct triples in lexicographic order (slack 1e-9).
Verdict check_metric(const DissimilarityMap& delta);

// d(u,v) + d(x,y) <= max of the other two pairings, for every quadruple
// u < v < x < y (relative slack 1e-9).
Verdict check_four_point(const DissimilarityMap& delta);

// Path-length metric over tree.leaves().
DissimilarityMap tree_metric(const PhyloTree& tree);

// Bipartition of the taxa; `side` holds the smallest label. Both sides sorted.
struct Split {
  std::vector<std::string> side;
  std::vector<std::string> other;

  friend bool operator==(const Split&, const Split&) = default;
  friend auto operator<=>(const Split&, const Split&) = default;
};

Split make_split(std::vector<std::string> a, std::vector<std::string> b);

struct TreeSplits {
  std::vector<Split> splits;    // sorted
  std::vector<double> lengths;  // edge length per split
  bool binary = true;           // false when fewer than 2n - 3 splits
};

// One split per edge of the unrooted tree (trivial splits included).
TreeSplits splits_of_tree(const PhyloTree& tree);

// Throws Error if the two splits are over different taxon sets.
bool splits_compatible(const Split& a, const Split& b);

struct NjResult {
  PhyloTree tree;
  // Joined pairs in order (label of the smaller side first).
  std::vector<std::pair<std::string, std::string>> joins;
  bool clamped = false;  // some branch length was negative and set to 0
};

// Neighbor joining with the Q-criterion; minimum Q ties go to the pair whose
// labels come first lexicographically.
NjResult neighbor_join(const DissimilarityMap& delta);

// Q table of the pair criterion, n x n, diagonal 0 (for inspection).
std::vector<double> nj_q_table(const DissimilarityMap& delta);

struct MDissimilarityMap {
  std::vector<std::string> taxa;
  int m = 0;
  // One value per m-subset, in colex order of the sorted index tuples.
  std::vector<double> values;

  std::size_t n() const { return taxa.size(); }
  // Value of a tuple in any order; 0 if indices repeat.
  double at(std::span<const int> tuple) const;
  double& at_sorted(std::span<const int> sorted);
  void validate() const;
};

// Colex rank of a strictly increasing index tuple.
std::size_t subset_rank(std::span<const int> sorted);
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// Spanning-subtree lengths of every m-subset of leaves.
MDissimilarityMap m_dissimilarity(const PhyloTree& tree, int m);

struct CherryPick {
  int i = 0, j = 0;  // taxon indices
  std::vector<double> q;  // n x n, diagonal 0
};

CherryPick generalized_nj_cherry(const MDissimilarityMap& delta);

struct GeneralizedNjResult {
  PhyloTree tree;
  std::vector<std::pair<std::string, std::string>> joins;
  bool clamped = false;
};

// m = 3 only: cherry picking with the averaging update down to four nodes,
// whose quartet is the resolution best fitting the input (for n = 4 the single
// cherry pick decides). Branch lengths by minimum-norm least squares against
// all 3-subset values.
GeneralizedNjResult generalized_neighbor_join(const MDissimilarityMap& delta);

// Every induced map delta(i, j, Y) over an (m-2)-subset Y is a non-negative
// four-point metric. Witness: Y then the quadruple (or pair for negativity).
Verdict check_m_tree(const MDissimilarityMap& delta);

// Left minus right side of the five linear relations satisfied by tree
// 3-dissimilarity maps on six taxa (taxa numbered in input order).
std::array<double, 5> gr36_residuals(const MDissimilarityMap& delta);

// (2n - 5)!!, the number of binary unrooted trees on n taxa.
BigInt schroder_count(int n);

}  // namespace phylokit
