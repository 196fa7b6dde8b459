#pragma once

// Text formats: Newick trees, PHYLIP/JSON distance matrices, FASTA.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phylokit/kernels.hpp"
#include "phylokit/tree.hpp"
#include "phylokit/treespace.hpp"

namespace phylokit {

// Lengths default to 0; internal labels are kept; [comments] are skipped.
// Throws ParseError with the byte offset of the problem.
PhyloTree parse_newick(std::string_view text);

// Fixed-point lengths, children ordered by their smallest leaf label.
std::string emit_newick(const PhyloTree& tree, int decimals = 6);

// Square PHYLIP: a taxon count, then one "name d1 ... dn" row per taxon.
DissimilarityMap parse_phylip(std::string_view text);
std::string emit_phylip(const DissimilarityMap& delta, int decimals = 6);

// {"taxa": [...], "matrix": [[...], ...]}
DissimilarityMap parse_distance_json(std::string_view text);
std::string emit_distance_json(const DissimilarityMap& delta);

// JSON when the first non-blank character is '{', PHYLIP otherwise.
DissimilarityMap parse_distance_matrix(std::string_view text);

struct AlignedFasta {
  std::vector<std::pair<std::string, std::string>> records;

  // Throws Error for an unknown name.
  const std::string& sequence(std::string_view name) const;
};

// Letters are upper-cased; allowed characters are A, C, G, T, N and '-'.
// Header names end at the first blank.
AlignedFasta parse_fasta(std::string_view text);

// Columns where both characters are A/C/G/T, and how many of those differ.
// Gap and N columns are dropped for this pair only.
kernels::SiteCounts pairwise_site_differences(const AlignedFasta& fasta, std::string_view taxon1,
                                              std::string_view taxon2);

// Every exact occurrence, overlaps included (0-based).
std::vector<std::size_t> find_motif(std::string_view sequence, std::string_view motif);

std::string read_file(const std::string& path);

}  // namespace phylokit
