#include "phylokit/pipeline.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "phylokit/error.hpp"
#include "phylokit/evolution.hpp"

namespace phylokit {

DissimilarityMap alignment_distances(const AlignedFasta& fasta, std::vector<PairwiseDistance>* pairs) {
  const std::size_t n = fasta.records.size();
  DissimilarityMap d;
  d.d.assign(n * n, 0.0);
  for (const auto& r : fasta.records) d.taxa.push_back(r.first);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& a = d.taxa[i];
      const auto& b = d.taxa[j];
      const auto c = pairwise_site_differences(fasta, a, b);
      double dist;
      try {
        dist = jc_distance(c.sites, c.differences);
      } catch (const Error& e) {
        throw Error("pair (" + a + ", " + b + "): " + e.what());
      }
      d.d[i * n + j] = d.d[j * n + i] = dist;
      if (pairs) pairs->push_back({a, b, c.sites, c.differences, dist});
    }
  return d;
}

MotifScale motif_scale(double p_any, int length, double genome_length) {
  if (!(p_any > 0 && p_any <= 1)) throw Error("motif scale: probability must lie in (0, 1]");
  if (length < 1) throw Error("motif scale: motif length must be positive");
  if (!(genome_length > 0)) throw Error("motif scale: genome length must be positive");
  MotifScale s{};
  s.log10_p_motif = length * std::log10(p_any);
  s.log10_genome_scale = std::log10(genome_length) + s.log10_p_motif;
  s.p_motif = std::pow(p_any, length);
  s.genome_scale = genome_length * s.p_motif;
  return s;
}

PipelineReport run_pipeline(const PipelineConfig& config) {
  if (config.alignment.has_value() == config.distances.has_value()) {
    throw Error("pipeline: supply either an alignment or a distance matrix");
  }
  if (config.motif.empty()) throw Error("pipeline: empty motif");
  PipelineReport r;
  DissimilarityMap d;
  if (config.alignment) {
    d = alignment_distances(*config.alignment, &r.pairwise);
  } else {
    d = *config.distances;
    d.validate();
    for (std::size_t i = 0; i < d.n(); ++i)
      for (std::size_t j = i + 1; j < d.n(); ++j) r.pairwise.push_back({d.taxa[i], d.taxa[j], 0, 0, d.at(i, j)});
  }
  auto nj = neighbor_join(d);
  r.tree = std::move(nj.tree);
  r.clamped = nj.clamped;
  r.newick = emit_newick(r.tree);
  const auto same = all_same_probability(r.tree);
  r.p_same = same.single_letter;
  r.p_any = same.any_letter;
  r.exponent = static_cast<int>(config.motif.size());
  r.genome_length = config.genome_length;
  const auto s = motif_scale(r.p_any, r.exponent, r.genome_length);
  r.p_motif = s.p_motif;
  r.genome_scale = s.genome_scale;
  r.log10_p_any = std::log10(r.p_any);
  r.log10_p_motif = s.log10_p_motif;
  r.log10_genome_scale = s.log10_genome_scale;
  if (config.motif_search) {
    for (const auto& [name, seq] : config.motif_search->records)
      for (auto p : find_motif(seq, config.motif)) r.motif_hits.push_back({name, p});
  }
  return r;
}

std::string report_json(const PipelineReport& r) {
  nlohmann::ordered_json j;
  j["specVersion"] = kReportVersion;
  auto pairs = nlohmann::ordered_json::array();
  for (const auto& p : r.pairwise) {
    nlohmann::ordered_json entry{{"a", p.a}, {"b", p.b}, {"n", nullptr}, {"k", nullptr}, {"distance", p.distance}};
    // Counts exist only when distances came from an alignment.
    if (p.sites > 0) {
      entry["n"] = p.sites;
      entry["k"] = p.differences;
    }
    pairs.push_back(entry);
  }
  j["pairwise"] = pairs;
  j["newick"] = r.newick;
  j["clampedBranchLengths"] = r.clamped;
  j["pSame"] = r.p_same;
  j["pAny"] = r.p_any;
  j["exponent"] = r.exponent;
  j["pMotif"] = r.p_motif;
  j["genomeLength"] = r.genome_length;
  j["genomeScale"] = r.genome_scale;
  j["log10"] = {{"pAny", r.log10_p_any}, {"pMotif", r.log10_p_motif}, {"genomeScale", r.log10_genome_scale}};
  auto hits = nlohmann::ordered_json::array();
  for (const auto& h : r.motif_hits) hits.push_back({{"taxon", h.taxon}, {"position", h.position}});
  j["motifHits"] = hits;
  j["gapHandling"] = "gap and N columns dropped per pair";
  return j.dump(2) + "\n";
}

std::string report_text(const PipelineReport& r) {
  std::string out;
  char buf[256];
  out += "tree         " + r.newick + "\n";
  if (r.clamped) out += "warning      negative branch lengths were set to 0\n";
  std::snprintf(buf, sizeof buf, "pSame        %.6g\npAny         %.6g\n", r.p_same, r.p_any);
  out += buf;
  std::snprintf(buf, sizeof buf, "pAny^%-7d %.4e (log10 %.4f)\n", r.exponent, r.p_motif, r.log10_p_motif);
  out += buf;
  std::snprintf(buf, sizeof buf, "genome scale %.4e (log10 %.4f, genome length %.4g)\n", r.genome_scale,
                r.log10_genome_scale, r.genome_length);
  out += buf;
  for (const auto& h : r.motif_hits) out += "motif hit    " + h.taxon + " at " + std::to_string(h.position) + "\n";
  return out;
}

}  // namespace phylokit
