#pragma once

#include <Eigen/Core>

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tvem {

using Vec2 = Eigen::Vector2d;

/// Boundary condition attached to a boundary edge. `Scatterer` marks the
/// inner boundary of the scattering domain; the problem setup decides
/// whether it acts as a Dirichlet or Neumann boundary.
enum class BoundaryLabel { Interior, Dirichlet, Neumann, Robin, Scatterer };

std::string to_string(BoundaryLabel label);
BoundaryLabel parse_boundary_label(const std::string& token);

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  std::array<int, 2> vertices{};        // v0 < v1
  std::array<int, 2> elements{-1, -1};  // elements[0] < elements[1]; -1 if absent
  BoundaryLabel label = BoundaryLabel::Interior;
  double length = 0.0;
  Vec2 midpoint = Vec2::Zero();
  Vec2 normal = Vec2::Zero();  // unit, outward from elements[0]

  bool is_boundary() const { return elements[1] < 0; }
};

struct Element {
  std::vector<int> vertices;  // counterclockwise
  std::vector<int> edges;     // edges[r] joins vertices[r] and vertices[r+1]
  Vec2 centroid = Vec2::Zero();
  double area = 0.0;
  double diameter = 0.0;
};

/// Polygonal mesh. Immutable after construction; edge ids are sorted by
/// the canonical (min vertex, max vertex) key.
class PolygonalMesh {
 public:
  PolygonalMesh() = default;

  /// Builds topology and geometry. Boundary edges receive `default_label`
  /// unless `labeler` (called with the edge midpoint) returns a value.
  /// Throws MeshError on degenerate, clockwise or non-manifold input.
  PolygonalMesh(std::vector<Vec2> vertices, std::vector<std::vector<int>> elements,
                BoundaryLabel default_label = BoundaryLabel::Robin,
                const std::function<std::optional<BoundaryLabel>(const Edge&)>& labeler = {});

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<Element>& elements() const { return elements_; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::size_t num_elements() const { return elements_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  /// Global mesh size: max element diameter.
  double h() const { return h_; }
  double total_area() const;

  /// Edge id for the unordered vertex pair, or -1.
  int find_edge(int a, int b) const;

  /// Copy with every boundary edge relabelled by `relabel(edge)`.
  PolygonalMesh relabeled(const std::function<BoundaryLabel(const Edge&)>& relabel) const;
  PolygonalMesh with_uniform_boundary(BoundaryLabel label) const;

  std::size_t count_boundary(BoundaryLabel label) const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<Element> elements_;
  std::vector<Edge> edges_;
  double h_ = 0.0;
};

double polygon_signed_area(const std::vector<Vec2>& poly);
Vec2 polygon_centroid(const std::vector<Vec2>& poly);
double polygon_diameter(const std::vector<Vec2>& poly);
std::vector<Vec2> element_polygon(const PolygonalMesh& mesh, std::size_t element);
bool point_in_polygon(const std::vector<Vec2>& poly, const Vec2& x);

/// Inserts into every element boundary all mesh vertices lying strictly
/// inside one of its sides (hanging nodes become polygon vertices).
std::vector<std::vector<int>> conformize(const std::vector<Vec2>& vertices,
                                         std::vector<std::vector<int>> elements, double tol = 1e-12);

/// Relabels boundary edges from a spec such as "R" or "R,left=D,top=N": a
/// bare label applies to every boundary edge, `side=label` to the edges whose
/// outward normal points left, right, bottom or top. Scatterer edges keep
/// their label.
PolygonalMesh apply_boundary_spec(const PolygonalMesh& mesh, const std::string& spec);

// ---- generators -----------------------------------------------------------

/// n x n squares on [x0,x1] x [y0,y1]; all boundary edges get `label`.
PolygonalMesh build_cartesian_mesh(int n, double x0 = 0.0, double x1 = 1.0, double y0 = 0.0,
                                   double y1 = 1.0, BoundaryLabel label = BoundaryLabel::Robin);

/// Uniform squares covering (-1,2)x(0,3) minus [0,1]x[1,2]; 3*2^level cells
/// per side. Inner boundary: Scatterer, outer boundary: Robin.
PolygonalMesh build_hole_mesh(int level);

struct GradedMeshSpec {
  int level = 0;        // n
  double mu = 0.5;      // grading parameter in (0,1)
  Vec2 singular_point = Vec2(0.0, 0.5);
};

struct GradedMesh {
  PolygonalMesh mesh;
  std::vector<int> layer;   // per element
  std::vector<int> degree;  // q_K = layer + 1
};

/// Unit square graded toward (0, 0.5): the layer-0 square of side s is
/// split at x = mu*s and y = 0.5 +- mu*s/2, recursively, n times.
GradedMesh build_graded_mesh(const GradedMeshSpec& spec,
                             BoundaryLabel label = BoundaryLabel::Robin);

// ---- file format ----------------------------------------------------------

PolygonalMesh load_mesh(const std::string& path);
PolygonalMesh parse_mesh(const std::string& text);
std::string format_mesh(const PolygonalMesh& mesh);
void save_mesh(const PolygonalMesh& mesh, const std::string& path);

/// Locates elements containing points, using a uniform bucket grid.
class PointLocator {
 public:
  explicit PointLocator(const PolygonalMesh& mesh);
  /// Element containing `x` (boundary points resolve to any adjacent element), or -1.
  int locate(const Vec2& x) const;

 private:
  const PolygonalMesh* mesh_;
  std::vector<std::vector<Vec2>> polys_;
  Vec2 lo_, hi_;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> buckets_;
};

}  // namespace tvem
