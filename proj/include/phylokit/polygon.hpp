#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace phylokit {

struct LatticePoint {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

inline LatticePoint operator+(LatticePoint a, LatticePoint b) {
  return {a.x + b.x, a.y + b.y};
}

// Convex lattice polygon, possibly degenerate (empty, a point, a segment).
//
// Canonical form: vertices in strict convex position, counter-clockwise,
// starting at the lexicographically smallest vertex. Each vertex may carry a
// witness word (e.g. the alignment realizing it); witnesses concatenate under
// polygon_product and the lexicographically smaller one wins when two inputs
// of polygon_sum share a vertex. Equality ignores witnesses.
class LatticePolygon {
 public:
  LatticePolygon() = default;

  // Convex hull of the given points, canonicalized.
  static LatticePolygon hull(std::span<const LatticePoint> points);
  static LatticePolygon hull(std::span<const LatticePoint> points,
                             std::span<const std::string> witnesses);
  static LatticePolygon point(LatticePoint p, std::string witness = {});

  const std::vector<LatticePoint>& vertices() const { return vertices_; }
  const std::vector<std::string>& witnesses() const { return witnesses_; }
  bool empty() const { return vertices_.empty(); }
  std::size_t size() const { return vertices_.size(); }

  friend bool operator==(const LatticePolygon& a, const LatticePolygon& b) {
    return a.vertices_ == b.vertices_;
  }

 private:
  std::vector<LatticePoint> vertices_;
  std::vector<std::string> witnesses_;
};

// conv(a ∪ b)
LatticePolygon polygon_sum(const LatticePolygon& a, const LatticePolygon& b);
// Minkowski sum a + b
LatticePolygon polygon_product(const LatticePolygon& a, const LatticePolygon& b);

}  // namespace phylokit
