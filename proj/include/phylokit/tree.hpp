#pragma once

// Rooted storage of a phylogenetic X-tree. The unrooted view suppresses a
// root of degree 2.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace phylokit {

class PhyloTree {
 public:
  struct Node {
    int parent = -1;
    std::vector<int> children;
    double length = 0;  // of the edge to the parent
    std::string name;

    bool is_leaf() const { return children.empty(); }
  };

  int add_root(std::string name = {});
  int add_child(int parent, double length, std::string name = {});

  const Node& node(int i) const { return nodes_[i]; }
  void set_length(int i, double length) { nodes_[i].length = length; }
  void set_name(int i, std::string name) { nodes_[i].name = std::move(name); }
  int size() const { return static_cast<int>(nodes_.size()); }
  int root() const { return 0; }

  // Leaf node indices in node order.
  std::vector<int> leaves() const;
  std::vector<std::string> leaf_names() const;
  std::optional<int> find(std::string_view name) const;

  // Parents before children.
  std::vector<int> preorder() const;

  // Throws Error unless leaf names are non-empty and unique, lengths are
  // finite and non-negative, the root has at least two children and every
  // other internal node has at least two children.
  void validate() const;

  // Same unrooted tree, rooted at a new vertex placed on the edge above
  // child, fraction of the way from the parent end. A degree-2 root of the
  // original is suppressed.
  PhyloTree rooted_on_edge(int child, double fraction) const;

  // Path lengths between leaves, row-major in leaves() order.
  std::vector<double> leaf_distances() const;

 private:
  std::vector<Node> nodes_;
};

}  // namespace phylokit
