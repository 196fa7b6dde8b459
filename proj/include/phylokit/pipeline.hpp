#pragma once

// Distances -> neighbor-joining tree -> probability that a fixed motif is
// conserved in every taxon -> genome-scale expectation.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phylokit/io.hpp"
#include "phylokit/tree.hpp"
#include "phylokit/treespace.hpp"

namespace phylokit {

inline constexpr const char* kConservedMotif = "TTTAATTGAAAGAAGTTAATTGAATGAAAATGATCAACTAAG";
inline constexpr double kDefaultGenomeLength = 2.8e9;
inline constexpr int kReportVersion = 1;

struct PipelineConfig {
  // Exactly one of alignment / distances.
  std::optional<AlignedFasta> alignment;
  std::optional<DissimilarityMap> distances;
  std::string motif = kConservedMotif;
  double genome_length = kDefaultGenomeLength;
  // Sequences scanned for the motif (raw, including any gaps).
  std::optional<AlignedFasta> motif_search;
};

struct PairwiseDistance {
  std::string a, b;
  std::int64_t sites = 0;        // 0 when the distance came from a matrix
  std::int64_t differences = 0;
  double distance = 0;
};

struct MotifHit {
  std::string taxon;
  std::size_t position = 0;
};

struct PipelineReport {
  std::vector<PairwiseDistance> pairwise;
  PhyloTree tree;
  std::string newick;
  bool clamped = false;
  double p_same = 0;
  double p_any = 0;
  int exponent = 0;  // motif length
  double p_motif = 0;
  double genome_length = 0;
  double genome_scale = 0;
  double log10_p_any = 0;
  double log10_p_motif = 0;
  double log10_genome_scale = 0;
  std::vector<MotifHit> motif_hits;
};

// Jukes-Cantor distance for every pair, in record order. A saturated pair
// raises Error naming both taxa.
DissimilarityMap alignment_distances(const AlignedFasta& fasta, std::vector<PairwiseDistance>* pairs = nullptr);

// pAny^length and genome_length * pAny^length, with log10 values.
struct MotifScale {
  double p_motif, genome_scale, log10_p_motif, log10_genome_scale;
};
MotifScale motif_scale(double p_any, int length, double genome_length);

PipelineReport run_pipeline(const PipelineConfig& config);

std::string report_json(const PipelineReport& report);
std::string report_text(const PipelineReport& report);

}  // namespace phylokit
