#include "phylokit/polygon.hpp"

#include <algorithm>
#include <numeric>

namespace phylokit {
namespace {

std::int64_t cross(LatticePoint o, LatticePoint a, LatticePoint b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::int64_t cross(LatticePoint u, LatticePoint v) { return u.x * v.y - u.y * v.x; }

LatticePoint minus(LatticePoint a, LatticePoint b) { return {a.x - b.x, a.y - b.y}; }

}  // namespace

LatticePolygon LatticePolygon::hull(std::span<const LatticePoint> points) {
  std::vector<std::string> none(points.size());
  return hull(points, none);
}

// Andrew's monotone chain; collinear points are dropped.
LatticePolygon LatticePolygon::hull(std::span<const LatticePoint> points,
                                    std::span<const std::string> witnesses) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a] != points[b]) return points[a] < points[b];
    return witnesses[a] < witnesses[b];
  });
  // Unique points, keeping the smallest witness for each.
  std::vector<LatticePoint> pts;
  std::vector<const std::string*> wit;
  for (std::size_t idx : order) {
    if (!pts.empty() && pts.back() == points[idx]) continue;
    pts.push_back(points[idx]);
    wit.push_back(&witnesses[idx]);
  }

  LatticePolygon out;
  if (pts.size() <= 2) {
    out.vertices_ = pts;
    for (const auto* w : wit) out.witnesses_.push_back(*w);
    return out;
  }

  std::vector<std::size_t> chain(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(pts[chain[k - 2]], pts[chain[k - 1]], pts[i]) <= 0) --k;
    chain[k++] = i;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(pts[chain[k - 2]], pts[chain[k - 1]], pts[i]) <= 0) --k;
    chain[k++] = i;
  }
  // Last entry repeats the first.
  chain.resize(k - 1);
  for (std::size_t i : chain) {
    out.vertices_.push_back(pts[i]);
    out.witnesses_.push_back(*wit[i]);
  }
  return out;
}

LatticePolygon LatticePolygon::point(LatticePoint p, std::string witness) {
  LatticePolygon out;
  out.vertices_.push_back(p);
  out.witnesses_.push_back(std::move(witness));
  return out;
}

LatticePolygon polygon_sum(const LatticePolygon& a, const LatticePolygon& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  std::vector<LatticePoint> pts(a.vertices());
  pts.insert(pts.end(), b.vertices().begin(), b.vertices().end());
  std::vector<std::string> wit(a.witnesses());
  wit.insert(wit.end(), b.witnesses().begin(), b.witnesses().end());
  return LatticePolygon::hull(pts, wit);
}

// Merges the edge sequences of both polygons by polar angle. Both canonical
// forms start at the extreme vertex for the same direction, so the merge
// starts at the sum of the two start vertices.
LatticePolygon polygon_product(const LatticePolygon& a, const LatticePolygon& b) {
  if (a.empty() || b.empty()) return {};
  const auto& va = a.vertices();
  const auto& vb = b.vertices();
  const auto& wa = a.witnesses();
  const auto& wb = b.witnesses();
  const std::size_t na = va.size();
  const std::size_t nb = vb.size();
  // A point has no edges; a segment has two (there and back).
  const std::size_t ea = na == 1 ? 0 : na;
  const std::size_t eb = nb == 1 ? 0 : nb;

  std::vector<LatticePoint> pts;
  std::vector<std::string> wit;
  pts.reserve(ea + eb + 1);
  std::size_t i = 0;
  std::size_t j = 0;
  while (true) {
    pts.push_back(va[i % na] + vb[j % nb]);
    wit.push_back(wa[i % na] + wb[j % nb]);
    if (i >= ea && j >= eb) break;
    if (i >= ea) {
      ++j;
    } else if (j >= eb) {
      ++i;
    } else {
      const LatticePoint da = minus(va[(i + 1) % na], va[i % na]);
      const LatticePoint db = minus(vb[(j + 1) % nb], vb[j % nb]);
      const std::int64_t c = cross(da, db);
      if (c >= 0) ++i;
      if (c <= 0) ++j;
    }
  }
  pts.pop_back();  // back at the start vertex
  wit.pop_back();
  if (pts.empty()) {
    pts.push_back(va[0] + vb[0]);
    wit.push_back(wa[0] + wb[0]);
  }
  return LatticePolygon::hull(pts, wit);
}

}  // namespace phylokit
