#include "tvem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

namespace tvem {

std::string to_string(BoundaryLabel label) {
  switch (label) {
    case BoundaryLabel::Interior: return "I";
    case BoundaryLabel::Dirichlet: return "D";
    case BoundaryLabel::Neumann: return "N";
    case BoundaryLabel::Robin: return "R";
    case BoundaryLabel::Scatterer: return "Sc";
  }
  return "?";
}

BoundaryLabel parse_boundary_label(const std::string& token) {
  if (token == "D") return BoundaryLabel::Dirichlet;
  if (token == "N") return BoundaryLabel::Neumann;
  if (token == "R") return BoundaryLabel::Robin;
  if (token == "Sc") return BoundaryLabel::Scatterer;
  throw MeshError("unknown boundary label '" + token + "'");
}

double polygon_signed_area(const std::vector<Vec2>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % poly.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

Vec2 polygon_centroid(const std::vector<Vec2>& poly) {
  // shift by the first vertex to limit cancellation
  const Vec2 o = poly.front();
  double a = 0.0;
  Vec2 c = Vec2::Zero();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 p = poly[i] - o;
    const Vec2 q = poly[(i + 1) % poly.size()] - o;
    const double cr = p.x() * q.y() - q.x() * p.y();
    a += cr;
    c += cr * (p + q);
  }
  return o + c / (3.0 * a);
}

double polygon_diameter(const std::vector<Vec2>& poly) {
  double d = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    for (std::size_t j = i + 1; j < poly.size(); ++j) d = std::max(d, (poly[i] - poly[j]).norm());
  return d;
}

bool point_in_polygon(const std::vector<Vec2>& poly, const Vec2& x) {
  // winding-number test; points on the boundary count as inside
  constexpr double eps = 1e-12;
  int winding = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % poly.size()];
    const Vec2 ab = b - a;
    const double cr = ab.x() * (x.y() - a.y()) - ab.y() * (x.x() - a.x());
    const double len = ab.norm();
    if (std::abs(cr) <= eps * len * std::max(1.0, len)) {
      const double t = ab.dot(x - a) / (len * len);
      if (t >= -eps && t <= 1.0 + eps) return true;
    }
    if (a.y() <= x.y()) {
      if (b.y() > x.y() && cr > 0) ++winding;
    } else if (b.y() <= x.y() && cr < 0) {
      --winding;
    }
  }
  return winding != 0;
}

std::vector<Vec2> element_polygon(const PolygonalMesh& mesh, std::size_t element) {
  std::vector<Vec2> poly;
  for (int v : mesh.elements()[element].vertices) poly.push_back(mesh.vertices()[v]);
  return poly;
}

PolygonalMesh::PolygonalMesh(
    std::vector<Vec2> vertices, std::vector<std::vector<int>> elements,
    BoundaryLabel default_label,
    const std::function<std::optional<BoundaryLabel>(const Edge&)>& labeler)
    : vertices_(std::move(vertices)) {
  const int nv = static_cast<int>(vertices_.size());

  struct Incidence {
    int element;
    int from;
  };
  std::map<std::pair<int, int>, std::vector<Incidence>> incidence;

  elements_.resize(elements.size());
  for (std::size_t k = 0; k < elements.size(); ++k) {
    const auto& ids = elements[k];
    if (ids.size() < 3) throw MeshError("element " + std::to_string(k) + " has fewer than 3 vertices");
    for (int v : ids)
      if (v < 0 || v >= nv) throw MeshError("element " + std::to_string(k) + " references missing vertex");
    Element& el = elements_[k];
    el.vertices = ids;
    std::vector<Vec2> poly;
    for (int v : ids) poly.push_back(vertices_[v]);
    el.area = polygon_signed_area(poly);
    if (!(el.area > 0.0))
      throw MeshError("element " + std::to_string(k) + " is degenerate or not counterclockwise");
    el.centroid = polygon_centroid(poly);
    el.diameter = polygon_diameter(poly);
    for (std::size_t r = 0; r < ids.size(); ++r) {
      const int a = ids[r];
      const int b = ids[(r + 1) % ids.size()];
      if (a == b) throw MeshError("element " + std::to_string(k) + " repeats a vertex");
      incidence[{std::min(a, b), std::max(a, b)}].push_back({static_cast<int>(k), a});
    }
  }

  // std::map iterates in canonical key order: edge ids follow the sorted key
  std::map<std::pair<int, int>, int> edge_id;
  for (const auto& [key, inc] : incidence) {
    if (inc.size() > 2)
      throw MeshError("non-manifold edge (" + std::to_string(key.first) + "," +
                      std::to_string(key.second) + ")");
    if (inc.size() == 2) {
      if (inc[0].element == inc[1].element)
        throw MeshError("element " + std::to_string(inc[0].element) + " uses edge twice");
      if (inc[0].from == inc[1].from)
        throw MeshError("inconsistent orientation on edge (" + std::to_string(key.first) + "," +
                        std::to_string(key.second) + ")");
    }
    Edge e;
    e.vertices = {key.first, key.second};
    std::vector<Incidence> sorted = inc;
    std::sort(sorted.begin(), sorted.end(),
              [](const Incidence& x, const Incidence& y) { return x.element < y.element; });
    e.elements[0] = sorted[0].element;
    if (sorted.size() == 2) e.elements[1] = sorted[1].element;
    const Vec2& pa = vertices_[key.first];
    const Vec2& pb = vertices_[key.second];
    e.length = (pb - pa).norm();
    e.midpoint = 0.5 * (pa + pb);
    // orientation as traversed by elements[0]
    const int from = sorted[0].from;
    const int to = from == key.first ? key.second : key.first;
    const Vec2 t = (vertices_[to] - vertices_[from]) / e.length;
    e.normal = Vec2(t.y(), -t.x());
    if (e.is_boundary()) {
      e.label = default_label;
      if (labeler) {
        if (auto l = labeler(e)) e.label = *l;
      }
    }
    edge_id[key] = static_cast<int>(edges_.size());
    edges_.push_back(e);
  }

  for (auto& el : elements_) {
    const std::size_t n = el.vertices.size();
    el.edges.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
      const int a = el.vertices[r];
      const int b = el.vertices[(r + 1) % n];
      el.edges[r] = edge_id.at({std::min(a, b), std::max(a, b)});
    }
    h_ = std::max(h_, el.diameter);
  }
}

double PolygonalMesh::total_area() const {
  double a = 0.0;
  for (const auto& el : elements_) a += el.area;
  return a;
}

int PolygonalMesh::find_edge(int a, int b) const {
  const std::array<int, 2> key{std::min(a, b), std::max(a, b)};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key,
                             [](const Edge& e, const std::array<int, 2>& k) { return e.vertices < k; });
  if (it != edges_.end() && it->vertices == key) return static_cast<int>(it - edges_.begin());
  return -1;
}

PolygonalMesh PolygonalMesh::relabeled(const std::function<BoundaryLabel(const Edge&)>& relabel) const {
  PolygonalMesh copy = *this;
  for (auto& e : copy.edges_)
    if (e.is_boundary()) e.label = relabel(e);
  return copy;
}

PolygonalMesh PolygonalMesh::with_uniform_boundary(BoundaryLabel label) const {
  return relabeled([label](const Edge&) { return label; });
}

std::size_t PolygonalMesh::count_boundary(BoundaryLabel label) const {
  return static_cast<std::size_t>(std::count_if(edges_.begin(), edges_.end(), [label](const Edge& e) {
    return e.is_boundary() && e.label == label;
  }));
}

std::vector<std::vector<int>> conformize(const std::vector<Vec2>& vertices,
                                         std::vector<std::vector<int>> elements, double tol) {
  for (auto& el : elements) {
    std::vector<int> out;
    for (std::size_t r = 0; r < el.size(); ++r) {
      const int a = el[r];
      const int b = el[(r + 1) % el.size()];
      const Vec2 pa = vertices[a];
      const Vec2 ab = vertices[b] - pa;
      const double len2 = ab.squaredNorm();
      std::vector<std::pair<double, int>> inner;
      for (int v = 0; v < static_cast<int>(vertices.size()); ++v) {
        if (v == a || v == b) continue;
        const Vec2 av = vertices[v] - pa;
        const double t = av.dot(ab) / len2;
        if (t <= tol || t >= 1.0 - tol) continue;
        const double cr = ab.x() * av.y() - ab.y() * av.x();
        if (std::abs(cr) <= tol * len2) inner.emplace_back(t, v);
      }
      std::sort(inner.begin(), inner.end());
      out.push_back(a);
      for (const auto& [t, v] : inner) out.push_back(v);
    }
    el = std::move(out);
  }
  return elements;
}

PointLocator::PointLocator(const PolygonalMesh& mesh) : mesh_(&mesh) {
  lo_ = Vec2::Constant(std::numeric_limits<double>::infinity());
  hi_ = -lo_;
  for (const auto& v : mesh.vertices()) {
    lo_ = lo_.cwiseMin(v);
    hi_ = hi_.cwiseMax(v);
  }
  const int n = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(mesh.num_elements()))));
  nx_ = ny_ = n;
  buckets_.resize(static_cast<std::size_t>(nx_) * ny_);
  const Vec2 span = (hi_ - lo_).cwiseMax(Vec2::Constant(1e-300));
  auto cell = [&](double x, double lo, double w, int m) {
    return std::clamp(static_cast<int>((x - lo) / w * m), 0, m - 1);
  };
  for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
    polys_.push_back(element_polygon(mesh, k));
    Vec2 blo = polys_.back().front(), bhi = blo;
    for (const auto& p : polys_.back()) {
      blo = blo.cwiseMin(p);
      bhi = bhi.cwiseMax(p);
    }
    const int i0 = cell(blo.x() - 1e-12, lo_.x(), span.x(), nx_), i1 = cell(bhi.x() + 1e-12, lo_.x(), span.x(), nx_);
    const int j0 = cell(blo.y() - 1e-12, lo_.y(), span.y(), ny_), j1 = cell(bhi.y() + 1e-12, lo_.y(), span.y(), ny_);
    for (int i = i0; i <= i1; ++i)
      for (int j = j0; j <= j1; ++j) buckets_[static_cast<std::size_t>(j) * nx_ + i].push_back(static_cast<int>(k));
  }
}

int PointLocator::locate(const Vec2& x) const {
  const Vec2 span = (hi_ - lo_).cwiseMax(Vec2::Constant(1e-300));
  if (x.x() < lo_.x() - 1e-12 || x.y() < lo_.y() - 1e-12 || x.x() > hi_.x() + 1e-12 || x.y() > hi_.y() + 1e-12)
    return -1;
  const int i = std::clamp(static_cast<int>((x.x() - lo_.x()) / span.x() * nx_), 0, nx_ - 1);
  const int j = std::clamp(static_cast<int>((x.y() - lo_.y()) / span.y() * ny_), 0, ny_ - 1);
  for (int k : buckets_[static_cast<std::size_t>(j) * nx_ + i])
    if (point_in_polygon(polys_[k], x)) return k;
  return -1;
}

PolygonalMesh apply_boundary_spec(const PolygonalMesh& mesh, const std::string& spec) {
  std::optional<BoundaryLabel> all;
  std::map<std::string, BoundaryLabel> sides;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      all = parse_boundary_label(item);
      continue;
    }
    const std::string side = item.substr(0, eq);
    if (side != "left" && side != "right" && side != "bottom" && side != "top")
      throw MeshError("unknown side '" + side + "' in boundary spec");
    sides[side] = parse_boundary_label(item.substr(eq + 1));
  }
  return mesh.relabeled([&](const Edge& e) {
    if (e.label == BoundaryLabel::Scatterer) return e.label;
    const Vec2& n = e.normal;  // outward on boundary edges
    const char* side = n.x() < -0.5 ? "left" : n.x() > 0.5 ? "right" : n.y() < -0.5 ? "bottom" : "top";
    const auto it = sides.find(side);
    if (it != sides.end() && std::abs(std::abs(n.x()) + std::abs(n.y()) - 1.0) < 1e-12) return it->second;
    return all ? *all : e.label;
  });
}

}  // namespace tvem
