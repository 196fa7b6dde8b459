#include "phylokit/tree.hpp"

#include <cmath>
#include <set>

#include "phylokit/error.hpp"

namespace phylokit {

int PhyloTree::add_root(std::string name) {
  if (!nodes_.empty()) throw Error("tree: root already exists");
  nodes_.push_back({-1, {}, 0.0, std::move(name)});
  return 0;
}

int PhyloTree::add_child(int parent, double length, std::string name) {
  if (parent < 0 || parent >= size()) throw Error("tree: parent index out of range");
  const int id = size();
  nodes_.push_back({parent, {}, length, std::move(name)});
  nodes_[parent].children.push_back(id);
  return id;
}

std::vector<int> PhyloTree::leaves() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (nodes_[i].is_leaf()) out.push_back(i);
  return out;
}

std::vector<std::string> PhyloTree::leaf_names() const {
  std::vector<std::string> out;
  for (int i : leaves()) out.push_back(nodes_[i].name);
  return out;
}

std::optional<int> PhyloTree::find(std::string_view name) const {
  for (int i = 0; i < size(); ++i)
    if (nodes_[i].is_leaf() && nodes_[i].name == name) return i;
  return std::nullopt;
}

std::vector<int> PhyloTree::preorder() const {
  std::vector<int> order;
  if (nodes_.empty()) return order;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (auto it = nodes_[v].children.rbegin(); it != nodes_[v].children.rend(); ++it) {
      stack.push_back(*it);
    }
  }
  return order;
}

void PhyloTree::validate() const {
  if (nodes_.empty()) throw Error("tree: empty");
  std::set<std::string> seen;
  for (int i = 0; i < size(); ++i) {
    const Node& v = nodes_[i];
    if (i != 0 && !(std::isfinite(v.length) && v.length >= 0)) {
      throw Error("tree: edge above node " + std::to_string(i) + " has invalid length " +
                  std::to_string(v.length));
    }
    if (v.is_leaf()) {
      if (i == 0) throw Error("tree: a single vertex is not a tree");
      if (v.name.empty()) throw Error("tree: unnamed leaf");
      if (!seen.insert(v.name).second) throw Error("tree: duplicate leaf name '" + v.name + "'");
    } else if (v.children.size() < 2) {
      throw Error("tree: internal node " + std::to_string(i) + " has a single child");
    }
  }
}

namespace {

struct Adjacent {
  int to;
  double length;
};

}  // namespace

PhyloTree PhyloTree::rooted_on_edge(int child, double fraction) const {
  if (child <= 0 || child >= size()) throw Error("tree: rerooting edge out of range");
  if (!(fraction >= 0 && fraction <= 1)) throw Error("tree: fraction must lie in [0, 1]");
  const int n = size();
  std::vector<std::vector<Adjacent>> adj(n + 1);
  for (int v = 1; v < n; ++v) {
    if (v == child) continue;
    adj[v].push_back({nodes_[v].parent, nodes_[v].length});
    adj[nodes_[v].parent].push_back({v, nodes_[v].length});
  }
  const int mid = n;
  const int up = nodes_[child].parent;
  const double len = nodes_[child].length;
  adj[mid].push_back({up, fraction * len});
  adj[up].push_back({mid, fraction * len});
  adj[mid].push_back({child, (1 - fraction) * len});
  adj[child].push_back({mid, (1 - fraction) * len});

  PhyloTree out;
  out.add_root();
  // (old vertex, came-from vertex, new parent, accumulated length)
  struct Item {
    int v, from, parent;
    double length;
  };
  std::vector<Item> stack;
  for (auto it = adj[mid].rbegin(); it != adj[mid].rend(); ++it) {
    stack.push_back({it->to, mid, 0, it->length});
  }
  while (!stack.empty()) {
    Item cur = stack.back();
    stack.pop_back();
    std::vector<Adjacent> onward;
    for (const auto& a : adj[cur.v])
      if (a.to != cur.from) onward.push_back(a);
    if (onward.size() == 1 && cur.v < n && !nodes_[cur.v].is_leaf()) {
      // Degree-2 vertex (the old root): merge its two edges.
      stack.push_back({onward[0].to, cur.v, cur.parent, cur.length + onward[0].length});
      continue;
    }
    const int id = out.add_child(cur.parent, cur.length, nodes_[cur.v].name);
    for (auto it = onward.rbegin(); it != onward.rend(); ++it) {
      stack.push_back({it->to, cur.v, id, it->length});
    }
  }
  return out;
}

std::vector<double> PhyloTree::leaf_distances() const {
  const auto leaf = leaves();
  const std::size_t m = leaf.size();
  std::vector<double> depth(size(), 0.0);
  std::vector<int> level(size(), 0);
  for (int v : preorder()) {
    if (v == 0) continue;
    depth[v] = depth[nodes_[v].parent] + nodes_[v].length;
    level[v] = level[nodes_[v].parent] + 1;
  }
  std::vector<double> d(m * m, 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      // Sum edge lengths up to the common ancestor.
      int x = leaf[a], y = leaf[b];
      double total = 0;
      while (x != y) {
        if (level[x] >= level[y]) {
          total += nodes_[x].length;
          x = nodes_[x].parent;
        } else {
          total += nodes_[y].length;
          y = nodes_[y].parent;
        }
      }
      d[a * m + b] = d[b * m + a] = total;
    }
  }
  return d;
}

}  // namespace phylokit
