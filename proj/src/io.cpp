#include "phylokit/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "phylokit/error.hpp"

namespace phylokit {
namespace {

class NewickParser {
 public:
  explicit NewickParser(std::string_view text) : s_(text) {}

  PhyloTree parse() {
    skip();
    if (peek() != '(') {
      // A bare leaf is not a tree we can store.
      throw ParseError("newick: expected '('", pos_);
    }
    tree_.add_root();
    subtree_children(0);
    skip();
    tree_.set_name(0, label());
    skip();
    if (peek() == ':') {
      ++pos_;
      number();  // root length is meaningless here
    }
    skip();
    if (peek() != ';') throw ParseError("newick: expected ';'", pos_);
    ++pos_;
    skip();
    if (pos_ != s_.size()) throw ParseError("newick: trailing characters", pos_);
    return std::move(tree_);
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void skip() {
    while (pos_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      } else if (s_[pos_] == '[') {
        const auto end = s_.find(']', pos_);
        if (end == std::string_view::npos) throw ParseError("newick: unterminated comment", pos_);
        pos_ = end + 1;
      } else {
        break;
      }
    }
  }

  // Reads "( child , child ... )" and attaches the children to parent.
  void subtree_children(int parent) {
    ++pos_;  // '('
    while (true) {
      skip();
      int node;
      if (peek() == '(') {
        node = tree_.add_child(parent, 0);
        subtree_children(node);
        skip();
        tree_.set_name(node, label());
      } else {
        const std::size_t at = pos_;
        std::string name = label();
        if (name.empty()) throw ParseError("newick: expected a leaf label", at);
        node = tree_.add_child(parent, 0, std::move(name));
      }
      skip();
      if (peek() == ':') {
        ++pos_;
        skip();
        tree_.set_length(node, number());
        skip();
      }
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() == ')') {
        ++pos_;
        return;
      }
      throw ParseError(pos_ >= s_.size() ? "newick: unbalanced parentheses" : "newick: expected ',' or ')'",
                       pos_);
    }
  }

  std::string label() {
    std::string out;
    if (peek() == '\'') {
      const std::size_t start = pos_++;
      while (true) {
        if (pos_ >= s_.size()) throw ParseError("newick: unterminated quoted label", start);
        if (s_[pos_] == '\'') {
          if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '\'') {
            out += '\'';
            pos_ += 2;
            continue;
          }
          ++pos_;
          return out;
        }
        out += s_[pos_++];
      }
    }
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '(' || c == ')' || c == ',' || c == ':' || c == ';' || c == '[' ||
          std::isspace(static_cast<unsigned char>(c))) {
        break;
      }
      out += c == '_' ? ' ' : c;
      ++pos_;
    }
    return out;
  }

  double number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                                s_[pos_] == '-' || s_[pos_] == '+' || s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
    }
    double v = 0;
    const auto r = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (start == pos_ || r.ec != std::errc() || r.ptr != s_.data() + pos_ || !std::isfinite(v)) {
      throw ParseError("newick: bad branch length", start);
    }
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  PhyloTree tree_;
};

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string quote_label(const std::string& name) {
  if (name.find_first_of("()[]',:; \t\n_") == std::string::npos) return name;
  std::string out = "'";
  for (char c : name) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

std::vector<std::string> tokens(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok, const std::string& what) {
  double v = 0;
  const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (r.ec != std::errc() || r.ptr != tok.data() + tok.size()) {
    throw Error(what + ": not a number: '" + tok + "'");
  }
  return v;
}

}  // namespace

PhyloTree parse_newick(std::string_view text) { return NewickParser(text).parse(); }

std::string emit_newick(const PhyloTree& tree, int decimals) {
  // Smallest leaf label under each node orders siblings.
  std::vector<std::string> key(tree.size());
  const auto order = tree.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto& nd = tree.node(*it);
    if (nd.is_leaf()) key[*it] = nd.name;
    if (*it != tree.root()) {
      auto& up = key[nd.parent];
      if (up.empty() || key[*it] < up) up = key[*it];
    }
  }
  std::string out;
  std::function<void(int)> emit = [&](int v) {
    const auto& nd = tree.node(v);
    if (!nd.is_leaf()) {
      auto kids = nd.children;
      std::sort(kids.begin(), kids.end(), [&](int a, int b) { return key[a] < key[b]; });
      out += '(';
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (i) out += ',';
        emit(kids[i]);
      }
      out += ')';
    }
    out += quote_label(nd.name);
    if (v != tree.root()) out += ':' + fixed(nd.length, decimals);
  };
  emit(tree.root());
  return out + ';';
}

DissimilarityMap parse_phylip(std::string_view text) {
  const auto tok = tokens(text);
  if (tok.empty()) throw Error("phylip: empty input");
  const double count = parse_double(tok[0], "phylip taxon count");
  if (count < 1 || count != std::floor(count)) throw Error("phylip: bad taxon count '" + tok[0] + "'");
  const std::size_t n = static_cast<std::size_t>(count);
  if (tok.size() != 1 + n * (n + 1)) {
    throw Error("phylip: expected " + std::to_string(n) + " rows of a name and " + std::to_string(n) +
                " values");
  }
  DissimilarityMap d;
  d.d.resize(n * n);
  std::size_t p = 1;
  for (std::size_t i = 0; i < n; ++i) {
    d.taxa.push_back(tok[p++]);
    for (std::size_t j = 0; j < n; ++j) d.d[i * n + j] = parse_double(tok[p++], "phylip row " + d.taxa.back());
  }
  d.validate();
  return d;
}

std::string emit_phylip(const DissimilarityMap& delta, int decimals) {
  std::string out = std::to_string(delta.n()) + "\n";
  for (std::size_t i = 0; i < delta.n(); ++i) {
    out += delta.taxa[i];
    for (std::size_t j = 0; j < delta.n(); ++j) out += ' ' + fixed(delta.at(i, j), decimals);
    out += '\n';
  }
  return out;
}

DissimilarityMap parse_distance_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("distance json: ") + e.what(), e.byte);
  }
  DissimilarityMap d;
  try {
    d.taxa = j.at("taxa").get<std::vector<std::string>>();
    const auto rows = j.at("matrix").get<std::vector<std::vector<double>>>();
    const std::size_t n = d.taxa.size();
    if (rows.size() != n) throw Error("distance json: matrix must have one row per taxon");
    for (const auto& row : rows) {
      if (row.size() != n) throw Error("distance json: matrix rows must have one value per taxon");
      d.d.insert(d.d.end(), row.begin(), row.end());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("distance json: ") + e.what());
  }
  d.validate();
  return d;
}

std::string emit_distance_json(const DissimilarityMap& delta) {
  nlohmann::json j;
  j["taxa"] = delta.taxa;
  auto rows = nlohmann::json::array();
  for (std::size_t i = 0; i < delta.n(); ++i) {
    rows.push_back(std::vector<double>(delta.d.begin() + i * delta.n(), delta.d.begin() + (i + 1) * delta.n()));
  }
  j["matrix"] = rows;
  return j.dump(2) + "\n";
}

DissimilarityMap parse_distance_matrix(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_distance_json(text);
  return parse_phylip(text);
}

const std::string& AlignedFasta::sequence(std::string_view name) const {
  for (const auto& [n, s] : records)
    if (n == name) return s;
  throw Error("fasta: no record named '" + std::string(name) + "'");
}

AlignedFasta parse_fasta(std::string_view text) {
  AlignedFasta out;
  std::set<std::string> seen;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty() && line[0] == '>') {
      const auto stop = line.find_first_of(" \t", 1);
      std::string name(line.substr(1, stop == std::string_view::npos ? std::string_view::npos : stop - 1));
      if (name.empty()) throw ParseError("fasta: empty record name", pos);
      if (!seen.insert(name).second) throw ParseError("fasta: duplicate record '" + name + "'", pos);
      out.records.emplace_back(std::move(name), std::string());
    } else {
      for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(line[i])));
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c != 'A' && c != 'C' && c != 'G' && c != 'T' && c != 'N' && c != '-') {
          throw ParseError(std::string("fasta: unexpected character '") + line[i] + "'", pos + i);
        }
        if (out.records.empty()) throw ParseError("fasta: sequence before the first header", pos + i);
        out.records.back().second += c;
      }
    }
    pos = end + 1;
  }
  if (out.records.empty()) throw Error("fasta: no records");
  return out;
}

kernels::SiteCounts pairwise_site_differences(const AlignedFasta& fasta, std::string_view taxon1,
                                              std::string_view taxon2) {
  const auto& a = fasta.sequence(taxon1);
  const auto& b = fasta.sequence(taxon2);
  if (a.size() != b.size()) {
    throw Error("fasta: '" + std::string(taxon1) + "' and '" + std::string(taxon2) + "' differ in length (" +
                std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
  return kernels::active().site_counts(a, b);
}

std::vector<std::size_t> find_motif(std::string_view sequence, std::string_view motif) {
  std::vector<std::size_t> hits;
  if (motif.empty()) throw Error("motif: empty motif");
  for (auto p = sequence.find(motif); p != std::string_view::npos; p = sequence.find(motif, p + 1)) {
    hits.push_back(p);
  }
  return hits;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace phylokit
