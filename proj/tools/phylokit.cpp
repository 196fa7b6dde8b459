// Command-line front end. Input problems exit with status 2.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "phylokit/codon_model.hpp"
#include "phylokit/error.hpp"
#include "phylokit/evolution.hpp"
#include "phylokit/hmm.hpp"
#include "phylokit/io.hpp"
#include "phylokit/pairhmm.hpp"
#include "phylokit/pipeline.hpp"
#include "phylokit/treespace.hpp"

using namespace phylokit;
using nlohmann::json;

namespace {

json load_json(const std::string& path) {
  const auto text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what(), e.byte);
  }
}

template <class T>
T field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(std::string("model field '") + key + "': " + e.what());
  }
}

HmmParams load_hmm(const std::string& path) {
  const auto j = load_json(path);
  const auto mode = j.value("mode", std::string("stochastic"));
  if (mode != "stochastic" && mode != "exact") throw Error("hmm mode must be 'stochastic' or 'exact'");
  auto h = HmmParams::make(field<std::size_t>(j, "k"), field<std::size_t>(j, "l"), field<std::vector<double>>(j, "S"),
                           field<std::vector<double>>(j, "T"),
                           mode == "exact" ? InitMode::kUnitInitial : InitMode::kStochastic,
                           j.contains("init") ? field<std::vector<double>>(j, "init") : std::vector<double>{});
  if (j.contains("labels")) h.labels = field<std::vector<std::string>>(j, "labels");
  if (j.contains("alphabet")) h.alphabet = field<std::string>(j, "alphabet");
  h.validate();
  return h;
}

json hmm_json(const HmmParams& h) {
  return {{"k", h.k},         {"l", h.l},           {"S", h.transitions},
          {"T", h.emissions}, {"init", h.initial},  {"mode", h.mode == InitMode::kUnitInitial ? "exact" : "stochastic"},
          {"labels", h.labels}, {"alphabet", h.alphabet}};
}

template <std::size_t N>
void fill(std::array<double, N>& out, const json& j, const char* key) {
  const auto v = field<std::vector<double>>(j, key);
  if (v.size() != N) throw Error(std::string("pair model field '") + key + "' needs " + std::to_string(N) + " values");
  std::copy(v.begin(), v.end(), out.begin());
}

PairHmmParams load_pair_hmm(const std::string& path) {
  const auto j = load_json(path);
  PairHmmParams p;
  fill(p.s, j, "S");
  fill(p.tm, j, "tM");
  fill(p.ti, j, "tI");
  fill(p.td, j, "tD");
  p.validate();
  return p;
}

DissimilarityMap load_distances(const std::string& path) { return parse_distance_matrix(read_file(path)); }
PhyloTree load_tree(const std::string& path) { return parse_newick(read_file(path)); }

void print_verdict(const Verdict& v, const std::vector<std::string>& taxa) {
  if (v.ok) {
    std::cout << (v.vacuous ? "ok (vacuous)\n" : "ok\n");
    return;
  }
  std::cout << "violated: " << v.message << "\nwitness:";
  for (int i : v.witness) std::cout << ' ' << taxa[i];
  std::cout << '\n';
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phylokit: algebraic statistics for sequence analysis"};
  app.require_subcommand(1);
  std::function<void()> action;

  // pipeline
  auto* pipe = app.add_subcommand("pipeline", "distances -> NJ tree -> conserved-motif probability");
  std::string p_dist, p_aln, p_search, p_out;
  std::string p_motif = kConservedMotif;
  double p_genome = kDefaultGenomeLength;
  auto* od = pipe->add_option("--distances", p_dist, "PHYLIP or JSON distance matrix")->check(CLI::ExistingFile);
  pipe->add_option("--alignment", p_aln, "aligned FASTA of four-fold degenerate sites")
      ->check(CLI::ExistingFile)
      ->excludes(od);
  pipe->add_option("--motif", p_motif, "motif whose length sets the exponent");
  pipe->add_option("--genome-length", p_genome, "genome length");
  pipe->add_option("--motif-search", p_search, "FASTA scanned for the motif")->check(CLI::ExistingFile);
  pipe->add_option("--out", p_out, "JSON report path");
  pipe->callback([&] {
    action = [&] {
      PipelineConfig cfg;
      if (!p_dist.empty()) cfg.distances = load_distances(p_dist);
      if (!p_aln.empty()) cfg.alignment = parse_fasta(read_file(p_aln));
      if (!p_search.empty()) cfg.motif_search = parse_fasta(read_file(p_search));
      cfg.motif = p_motif;
      cfg.genome_length = p_genome;
      const auto r = run_pipeline(cfg);
      std::cout << report_text(r);
      if (!p_out.empty()) write_output(p_out, report_json(r));
    };
  });

  // dist
  auto* dist = app.add_subcommand("dist", "Jukes-Cantor distances");
  std::string d_aln, d_format = "phylip";
  std::optional<std::int64_t> d_n, d_k;
  dist->add_option("--alignment", d_aln, "aligned FASTA")->check(CLI::ExistingFile);
  dist->add_option("--format", d_format, "phylip or json")->check(CLI::IsMember({"phylip", "json"}));
  dist->add_option("--n", d_n, "compared sites");
  dist->add_option("--k", d_k, "differing sites");
  dist->callback([&] {
    action = [&] {
      if (d_n || d_k) {
        if (!d_n || !d_k) throw Error("dist: --n and --k go together");
        std::printf("%.6f\n", jc_distance(*d_n, *d_k));
        return;
      }
      if (d_aln.empty()) throw Error("dist: give --alignment or --n/--k");
      const auto d = alignment_distances(parse_fasta(read_file(d_aln)));
      std::cout << (d_format == "json" ? emit_distance_json(d) : emit_phylip(d));
    };
  });

  // nj
  auto* nj = app.add_subcommand("nj", "neighbor joining");
  auto* nj_build = nj->add_subcommand("build", "tree from a distance matrix");
  nj->require_subcommand(1);
  std::string nj_dist;
  nj_build->add_option("distances", nj_dist, "PHYLIP or JSON distance matrix")->required()->check(CLI::ExistingFile);
  nj_build->callback([&] {
    action = [&] {
      const auto r = neighbor_join(load_distances(nj_dist));
      if (r.clamped) std::cerr << "warning: negative branch lengths were set to 0\n";
      std::cout << emit_newick(r.tree) << '\n';
    };
  });

  // codon
  auto* codon = app.add_subcommand("codon", "codon independence model diagnostics");
  std::string c_fasta;
  codon->add_option("fasta", c_fasta, "FASTA of coding sequence(s), read in frame")->required()->check(CLI::ExistingFile);
  codon->callback([&] {
    action = [&] {
      CodonCounts total;
      for (const auto& [name, seq] : parse_fasta(read_file(c_fasta)).records) {
        const auto c = codon_counts_from_sequence(seq);
        for (int i = 0; i < 64; ++i) total.counts[i] += c.counts[i];
        total.total += c.total;
      }
      const auto t = independence_test(total);
      const auto p = empirical_distribution(total);
      const auto s = segre_residual(p);
      std::printf("codons %lld\nG2 %.6f\nchi2 %.6f\ndf %d\nsigma2 %.6e\nmax_minor %.6e\n",
                  static_cast<long long>(total.total), t.g2, t.chi2, t.df, s.sigma2(), s.max_minor);
    };
  });

  // motif
  auto* motif = app.add_subcommand("motif", "exact motif occurrences");
  std::string m_fasta, m_motif = kConservedMotif;
  motif->add_option("fasta", m_fasta, "FASTA to scan")->required()->check(CLI::ExistingFile);
  motif->add_option("--motif", m_motif, "motif");
  motif->callback([&] {
    action = [&] {
      for (const auto& [name, seq] : parse_fasta(read_file(m_fasta)).records)
        for (auto p : find_motif(seq, m_motif)) std::cout << name << '\t' << p << '\n';
    };
  });

  // align
  auto* align = app.add_subcommand("align", "pair hidden Markov model alignment");
  align->require_subcommand(1);
  std::string a_s1, a_s2, a_model;
  double a_mis = 1, a_gap = 1;
  auto pair_args = [&](CLI::App* sub) {
    sub->add_option("s1", a_s1, "first sequence")->required();
    sub->add_option("s2", a_s2, "second sequence")->required();
  };
  auto* a_prob = align->add_subcommand("prob", "probability of the pair, summed over alignments");
  pair_args(a_prob);
  a_prob->add_option("--model", a_model, "pair model JSON {S, tM, tI, tD}")->required()->check(CLI::ExistingFile);
  a_prob->callback([&] { action = [&] { std::printf("%.17g\n", pair_probability(load_pair_hmm(a_model), a_s1, a_s2)); }; });
  auto* a_vit = align->add_subcommand("viterbi", "most likely alignment");
  pair_args(a_vit);
  a_vit->add_option("--model", a_model, "pair model JSON {S, tM, tI, tD}")->required()->check(CLI::ExistingFile);
  a_vit->callback([&] {
    action = [&] {
      const auto r = viterbi_alignment(load_pair_hmm(a_model), a_s1, a_s2);
      std::printf("%s\t%.17g\n", r.word.c_str(), r.score);
    };
  });
  auto* a_score = align->add_subcommand("score", "best alignment under match 1, mismatch -mis, gap -gap");
  pair_args(a_score);
  a_score->add_option("--mis", a_mis, "mismatch penalty");
  a_score->add_option("--gap", a_gap, "gap penalty");
  a_score->callback([&] {
    action = [&] {
      const auto r = score_alignment_basic({a_mis, a_gap}, a_s1, a_s2);
      std::printf("%s\t%.17g\n", r.word.c_str(), r.score);
    };
  });
  auto* a_poly = align->add_subcommand("polygon", "hull of (mismatches, gaps) over all alignments");
  pair_args(a_poly);
  a_poly->callback([&] {
    action = [&] {
      const auto poly = parametric_polygon(a_s1, a_s2);
      for (std::size_t i = 0; i < poly.size(); ++i) {
        std::cout << poly.vertices()[i].x << '\t' << poly.vertices()[i].y;
        if (i < poly.witnesses().size()) std::cout << '\t' << poly.witnesses()[i];
        std::cout << '\n';
      }
    };
  });
  auto* a_enum = align->add_subcommand("enumerate", "all alignments of lengths n and m");
  std::size_t e_n = 0, e_m = 0;
  std::uint64_t e_cap = 1'000'000;
  bool e_count = false;
  a_enum->add_option("n", e_n)->required();
  a_enum->add_option("m", e_m)->required();
  a_enum->add_option("--cap", e_cap, "refuse to list more than this many");
  a_enum->add_flag("--count", e_count, "print only the count");
  a_enum->callback([&] {
    action = [&] {
      if (e_count) {
        std::cout << delannoy_count(e_n, e_m) << '\n';
        return;
      }
      for (const auto& w : enumerate_alignments(e_n, e_m, e_cap)) std::cout << w << '\n';
    };
  });

  // hmm
  auto* hmm = app.add_subcommand("hmm", "hidden Markov models");
  hmm->require_subcommand(1);
  std::string h_model;
  std::vector<std::string> h_obs;
  int h_iters = 50;
  double h_tol = 1e-9;
  auto model_opt = [&](CLI::App* sub) {
    sub->add_option("--model", h_model, "model JSON {k, l, S, T, init, mode}")->required()->check(CLI::ExistingFile);
  };
  auto* h_fwd = hmm->add_subcommand("forward", "probability of an observation");
  model_opt(h_fwd);
  h_fwd->add_option("observation", h_obs)->required()->expected(1);
  h_fwd->callback([&] {
    action = [&] {
      const auto h = load_hmm(h_model);
      const auto lp = forward_log_probability(h, encode_observation(h, h_obs[0]));
      std::printf("%.17g\t(log %.17g)\n", std::exp(lp), lp);
    };
  });
  auto* h_vit = hmm->add_subcommand("viterbi", "explanation of an observation");
  model_opt(h_vit);
  h_vit->add_option("observation", h_obs)->required()->expected(1);
  h_vit->callback([&] {
    action = [&] {
      const auto h = load_hmm(h_model);
      const auto e = viterbi_explanation(h, encode_observation(h, h_obs[0]));
      std::printf("%s\t%.17g\n", e.label_text(h).c_str(), e.log_score);
    };
  });
  auto* h_train = hmm->add_subcommand("train", "Baum-Welch from a starting model");
  model_opt(h_train);
  h_train->add_option("observations", h_obs)->required();
  h_train->add_option("--iters", h_iters);
  h_train->add_option("--tol", h_tol);
  h_train->callback([&] {
    action = [&] {
      const auto h = load_hmm(h_model);
      std::vector<Observation> data;
      for (const auto& o : h_obs) data.push_back(encode_observation(h, o));
      const auto r = baum_welch_train(h, data, h_iters, h_tol);
      json out = hmm_json(r.params);
      out["iterations"] = r.iterations;
      out["converged"] = r.converged;
      out["logLikelihoods"] = r.log_likelihoods;
      std::cout << out.dump(2) << '\n';
    };
  });

  // tree
  auto* tree = app.add_subcommand("tree", "tree metrics and tree space");
  tree->require_subcommand(1);
  std::string t_in;
  int t_m = 3;
  std::size_t t_len = 1000;
  std::uint64_t t_seed = 1;
  auto* t_four = tree->add_subcommand("fourpoint", "metric and four-point checks of a distance matrix");
  t_four->add_option("distances", t_in)->required()->check(CLI::ExistingFile);
  t_four->callback([&] {
    action = [&] {
      const auto d = load_distances(t_in);
      std::cout << "metric: ";
      print_verdict(check_metric(d), d.taxa);
      std::cout << "four-point: ";
      print_verdict(check_four_point(d), d.taxa);
    };
  });
  auto* t_mtree = tree->add_subcommand("mtree", "m-dissimilarity map of a tree and its m-tree check");
  t_mtree->add_option("tree", t_in, "Newick file")->required()->check(CLI::ExistingFile);
  t_mtree->add_option("--m", t_m, "subset size");
  t_mtree->callback([&] {
    action = [&] {
      const auto d = m_dissimilarity(load_tree(t_in), t_m);
      std::vector<int> c(t_m);
      for (std::size_t r = 0; r < d.values.size(); ++r) {
        // Unrank colex.
        std::size_t rest = r;
        for (int i = t_m - 1; i >= 0; --i) {
          int v = i;
          while (binomial(v + 1, i + 1) <= rest) ++v;
          c[i] = v;
          rest -= binomial(v, i + 1);
        }
        for (int i = 0; i < t_m; ++i) std::cout << (i ? "," : "") << d.taxa[c[i]];
        std::printf("\t%.6f\n", d.values[r]);
      }
      std::cout << "m-tree: ";
      print_verdict(check_m_tree(d), d.taxa);
      if (t_m == 3) {
        const auto g = generalized_nj_cherry(d);
        std::cout << "cherry: " << d.taxa[g.i] << ' ' << d.taxa[g.j] << '\n';
      }
    };
  });
  auto* t_gr = tree->add_subcommand("gr36", "the five linear relations on a six-taxon tree");
  t_gr->add_option("tree", t_in, "Newick file with six leaves")->required()->check(CLI::ExistingFile);
  t_gr->callback([&] {
    action = [&] {
      for (double r : gr36_residuals(m_dissimilarity(load_tree(t_in), 3))) std::printf("%.3e\n", r);
    };
  });
  auto* t_sim = tree->add_subcommand("simulate", "Jukes-Cantor leaf sequences as FASTA");
  t_sim->add_option("tree", t_in, "Newick file")->required()->check(CLI::ExistingFile);
  t_sim->add_option("--length", t_len, "sites");
  t_sim->add_option("--seed", t_seed, "seed");
  t_sim->callback([&] {
    action = [&] {
      const auto t = load_tree(t_in);
      const auto seqs = simulate_leaf_sequences(t, t_len, t_seed);
      for (const auto& name : t.leaf_names()) std::cout << '>' << name << '\n' << seqs.at(name) << '\n';
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    if (action) action();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
