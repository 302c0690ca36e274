#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>

#include "tvem/mesh.hpp"

namespace tvem {

namespace {

struct Rect {
  double x0, x1, y0, y1;
};

class VertexPool {
 public:
  int id(const Vec2& p) {
    const auto key = std::make_pair(std::llround(p.x() * 1e11), std::llround(p.y() * 1e11));
    auto [it, inserted] = index_.try_emplace(key, static_cast<int>(points_.size()));
    if (inserted) points_.push_back(p);
    return it->second;
  }
  std::vector<Vec2> take() { return std::move(points_); }

 private:
  std::map<std::pair<long long, long long>, int> index_;
  std::vector<Vec2> points_;
};

std::vector<int> rect_polygon(VertexPool& pool, const Rect& r) {
  return {pool.id({r.x0, r.y0}), pool.id({r.x1, r.y0}), pool.id({r.x1, r.y1}), pool.id({r.x0, r.y1})};
}

}  // namespace

PolygonalMesh build_cartesian_mesh(int n, double x0, double x1, double y0, double y1,
                                   BoundaryLabel label) {
  if (n < 1) throw MeshError("cartesian mesh needs n >= 1");
  if (!(x1 > x0) || !(y1 > y0)) throw MeshError("cartesian mesh needs a nondegenerate rectangle");
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      vertices.emplace_back(x0 + (x1 - x0) * i / n, y0 + (y1 - y0) * j / n);
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::vector<int>> elements;
  elements.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      elements.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
  return PolygonalMesh(std::move(vertices), std::move(elements), label);
}

PolygonalMesh build_hole_mesh(int level) {
  if (level < 0) throw MeshError("hole mesh needs level >= 0");
  const int m = 3 << level;  // cells per side of (-1,2)x(0,3)
  const double h = 3.0 / m;
  std::vector<Vec2> vertices;
  for (int j = 0; j <= m; ++j)
    for (int i = 0; i <= m; ++i) vertices.emplace_back(-1.0 + h * i, h * j);
  auto vid = [m](int i, int j) { return j * (m + 1) + i; };
  std::vector<std::vector<int>> elements;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      const double cx = -1.0 + h * (i + 0.5), cy = h * (j + 0.5);
      if (cx > 0.0 && cx < 1.0 && cy > 1.0 && cy < 2.0) continue;
      elements.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  // drop vertices strictly inside the scatterer
  std::vector<int> remap(vertices.size(), -1);
  std::vector<Vec2> used;
  for (auto& el : elements)
    for (int& v : el) {
      if (remap[v] < 0) {
        remap[v] = static_cast<int>(used.size());
        used.push_back(vertices[v]);
      }
      v = remap[v];
    }
  auto labeler = [](const Edge& e) -> std::optional<BoundaryLabel> {
    const Vec2& c = e.midpoint;
    const bool outer = std::abs(c.x() + 1.0) < 1e-12 || std::abs(c.x() - 2.0) < 1e-12 ||
                       std::abs(c.y()) < 1e-12 || std::abs(c.y() - 3.0) < 1e-12;
    return outer ? BoundaryLabel::Robin : BoundaryLabel::Scatterer;
  };
  return PolygonalMesh(std::move(used), std::move(elements), BoundaryLabel::Robin, labeler);
}

GradedMesh build_graded_mesh(const GradedMeshSpec& spec, BoundaryLabel label) {
  if (!(spec.mu > 0.0 && spec.mu < 1.0)) throw MeshError("grading parameter must lie in (0,1)");
  if (spec.level < 0) throw MeshError("graded mesh needs level >= 0");
  if ((spec.singular_point - Vec2(0.0, 0.5)).norm() > 1e-14)
    throw MeshError("graded meshes are only implemented for the singular point (0, 0.5)");

  const double c = 0.5;
  std::vector<Rect> rects;
  double s = 1.0;
  for (int i = 0; i < spec.level; ++i) {
    const double xs = spec.mu * s;
    const double ylo = c - s / 2, yhi = c + s / 2;
    const double ya = c - spec.mu * s / 2, yb = c + spec.mu * s / 2;
    rects.push_back({0.0, xs, ylo, ya});
    rects.push_back({0.0, xs, yb, yhi});
    rects.push_back({xs, s, ylo, ya});
    rects.push_back({xs, s, ya, yb});
    rects.push_back({xs, s, yb, yhi});
    s = xs;
  }
  rects.push_back({0.0, s, c - s / 2, c + s / 2});

  VertexPool pool;
  std::vector<std::vector<int>> polys;
  for (const auto& r : rects) polys.push_back(rect_polygon(pool, r));
  std::vector<Vec2> vertices = pool.take();
  polys = conformize(vertices, std::move(polys));

  GradedMesh out{PolygonalMesh(vertices, polys, label), {}, {}};
  const auto& mesh = out.mesh;
  const std::size_t ne = mesh.num_elements();
  out.layer.assign(ne, -1);
  std::vector<std::vector<int>> by_vertex(mesh.vertices().size());
  for (std::size_t k = 0; k < ne; ++k)
    for (int v : mesh.elements()[k].vertices) by_vertex[v].push_back(static_cast<int>(k));
  std::queue<int> frontier;
  for (std::size_t k = 0; k < ne; ++k)
    if (point_in_polygon(element_polygon(mesh, k), spec.singular_point)) {
      out.layer[k] = 0;
      frontier.push(static_cast<int>(k));
    }
  while (!frontier.empty()) {
    const int k = frontier.front();
    frontier.pop();
    for (int v : mesh.elements()[k].vertices)
      for (int nb : by_vertex[v])
        if (out.layer[nb] < 0) {
          out.layer[nb] = out.layer[k] + 1;
          frontier.push(nb);
        }
  }
  out.degree.resize(ne);
  for (std::size_t k = 0; k < ne; ++k) out.degree[k] = out.layer[k] + 1;
  return out;
}

}  // namespace tvem
