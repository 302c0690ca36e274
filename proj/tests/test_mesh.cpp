#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "tvem/experiments.hpp"
#include "tvem/mesh.hpp"

using namespace tvem;

namespace {

void check_invariants(const PolygonalMesh& mesh, double area) {
  CHECK(mesh.total_area() == doctest::Approx(area).epsilon(1e-12));
  std::vector<int> incidence(mesh.num_edges(), 0);
  for (const auto& el : mesh.elements()) {
    REQUIRE(el.vertices.size() == el.edges.size());
    for (int e : el.edges) ++incidence[e];
    CHECK(el.area > 0.0);
    double diam = 0.0;
    for (int a : el.vertices)
      for (int b : el.vertices) diam = std::max(diam, (mesh.vertices()[a] - mesh.vertices()[b]).norm());
    CHECK(el.diameter == doctest::Approx(diam).epsilon(1e-15));
  }
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edges()[e];
    CHECK(incidence[e] == (edge.is_boundary() ? 1 : 2));
    CHECK(std::abs(edge.normal.norm() - 1.0) <= 1e-14);
    CHECK(edge.length == doctest::Approx((mesh.vertices()[edge.vertices[0]] - mesh.vertices()[edge.vertices[1]]).norm()));
    CHECK(edge.vertices[0] < edge.vertices[1]);
    CHECK((edge.label == BoundaryLabel::Interior) == !edge.is_boundary());
    // the normal points away from elements[0]; centroids of concave cells may lie outside
    std::vector<Vec2> poly;
    for (int v : mesh.elements()[edge.elements[0]].vertices) poly.push_back(mesh.vertices()[v]);
    const double step = 1e-6 * edge.length;
    CHECK(point_in_polygon(poly, edge.midpoint - step * edge.normal));
    CHECK_FALSE(point_in_polygon(poly, edge.midpoint + step * edge.normal));
  }
}

}  // namespace

TEST_CASE("cartesian meshes") {
  const PolygonalMesh one = build_cartesian_mesh(1);
  CHECK(one.num_elements() == 1);
  CHECK(one.num_edges() == 4);
  CHECK(one.h() == doctest::Approx(std::sqrt(2.0)));
  const PolygonalMesh two = build_cartesian_mesh(2);
  CHECK(two.num_elements() == 4);
  CHECK(two.num_edges() == 12);
  check_invariants(build_cartesian_mesh(7), 1.0);
  check_invariants(build_cartesian_mesh(3, -1.0, 2.0, 0.0, 0.5), 1.5);
  CHECK(build_cartesian_mesh(4).count_boundary(BoundaryLabel::Robin) == 16);
}

TEST_CASE("hole meshes") {
  const PolygonalMesh l0 = build_hole_mesh(0);
  CHECK(l0.num_elements() == 8);
  CHECK(l0.count_boundary(BoundaryLabel::Scatterer) == 4);
  CHECK(l0.count_boundary(BoundaryLabel::Robin) == 12);
  CHECK(build_hole_mesh(1).num_elements() == 32);
  check_invariants(build_hole_mesh(2), 8.0);
}

TEST_CASE("graded meshes") {
  const GradedMesh g0 = build_graded_mesh({0, 1.0 / 3.0});
  CHECK(g0.mesh.num_elements() == 1);
  CHECK(g0.degree == std::vector<int>{1});

  const GradedMesh g1 = build_graded_mesh({1, 1.0 / 3.0});
  REQUIRE(g1.mesh.num_elements() == 6);
  CHECK(std::count(g1.degree.begin(), g1.degree.end(), 1) == 1);
  CHECK(std::count(g1.degree.begin(), g1.degree.end(), 2) == 5);

  CHECK(build_graded_mesh({2, 1.0 / 3.0}).mesh.num_elements() == 11);

  for (double mu : {0.5, 1.0 / 3.0})
    for (int n = 0; n <= 5; ++n) {
      const GradedMesh g = build_graded_mesh({n, mu});
      check_invariants(g.mesh, 1.0);
      for (std::size_t k = 0; k < g.mesh.num_elements(); ++k) {
        CHECK(g.degree[k] == g.layer[k] + 1);
        if (g.layer[k] == 0) {
          // the layer-0 cell is a square of side mu^n touching (0, 0.5)
          const auto poly = element_polygon(g.mesh, k);
          double xmax = 0.0;
          for (const auto& p : poly) xmax = std::max(xmax, p.x());
          CHECK(xmax == doctest::Approx(std::pow(mu, n)).epsilon(1e-14));
          CHECK(g.mesh.elements()[k].diameter == doctest::Approx(std::sqrt(2.0) * std::pow(mu, n)));
        }
      }
    }
  CHECK_THROWS_AS(build_graded_mesh({1, 1.5}), MeshError);
  CHECK_THROWS_AS(build_graded_mesh({1, 0.5, Vec2(1.0, 0.5)}), MeshError);
}

TEST_CASE("mesh files") {
  SUBCASE("single triangle") {
    const PolygonalMesh m = parse_mesh("vertices 3\n0 0 0\n1 1 0\n2 0 1\nelements 1\n0 0 1 2\nboundary\ndefault D\n");
    CHECK(m.num_elements() == 1);
    CHECK(m.count_boundary(BoundaryLabel::Dirichlet) == 3);
  }
  SUBCASE("explicit labels override the default") {
    const PolygonalMesh m =
        parse_mesh("vertices\n0 0 0\n1 1 0\n2 0 1\nelements\n0 0 1 2\nboundary\n0 1 N\n2 0 Sc\ndefault R\n");
    CHECK(m.edges()[m.find_edge(0, 1)].label == BoundaryLabel::Neumann);
    CHECK(m.edges()[m.find_edge(0, 2)].label == BoundaryLabel::Scatterer);
    CHECK(m.edges()[m.find_edge(1, 2)].label == BoundaryLabel::Robin);
  }
  SUBCASE("round trip is exact") {
    const PolygonalMesh m = load_mesh(source_path("data/meshes/voronoi_2.mesh"));
    const PolygonalMesh back = parse_mesh(format_mesh(m));
    REQUIRE(back.num_elements() == m.num_elements());
    for (std::size_t i = 0; i < m.vertices().size(); ++i) CHECK(back.vertices()[i] == m.vertices()[i]);
    for (std::size_t e = 0; e < m.num_edges(); ++e) CHECK(back.edges()[e].label == m.edges()[e].label);
  }
  SUBCASE("invalid input") {
    const std::string verts = "vertices\n0 0 0\n1 1 0\n2 1 1\n3 0 1\n";
    // the same directed edge used by two elements
    CHECK_THROWS_AS(parse_mesh(verts + "elements\n0 0 1 2\n1 0 1 3\nboundary\ndefault R\n"), MeshError);
    CHECK_THROWS_AS(parse_mesh(verts + "elements\n0 0 2 1\nboundary\ndefault R\n"), MeshError);  // clockwise
    CHECK_THROWS_AS(parse_mesh(verts + "elements\n0 0 1 7\nboundary\ndefault R\n"), MeshError);
    CHECK_THROWS_AS(parse_mesh(verts + "elements\n0 0 1 2\n"), MeshError);  // no label
    CHECK_THROWS_AS(parse_mesh(verts + "elements\n0 0 1 2\nboundary\n0 1 X\n"), MeshError);
    CHECK_THROWS_AS(parse_mesh("0 0 0\n"), MeshError);
    CHECK_THROWS_AS(load_mesh("/nonexistent/file.mesh"), MeshError);
  }
}

TEST_CASE("supplied meshes") {
  CHECK(load_mesh(source_path("data/meshes/voronoi8.mesh")).num_elements() == 8);
  const PolygonalMesh concave = load_mesh(source_path("data/meshes/concave8.mesh"));
  CHECK(concave.num_elements() == 8);
  check_invariants(concave, 1.0);
  const std::vector<std::size_t> cells = {4, 8, 16, 32, 64, 128, 256};
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const PolygonalMesh m = load_mesh(source_path("data/meshes/voronoi_" + std::to_string(i) + ".mesh"));
    CHECK(m.num_elements() == cells[i]);
    check_invariants(m, 1.0);
  }
}

TEST_CASE("boundary spec") {
  const PolygonalMesh m = apply_boundary_spec(build_cartesian_mesh(2), "R,left=D,top=N");
  CHECK(m.count_boundary(BoundaryLabel::Dirichlet) == 2);
  CHECK(m.count_boundary(BoundaryLabel::Neumann) == 2);
  CHECK(m.count_boundary(BoundaryLabel::Robin) == 4);
  const PolygonalMesh hole = apply_boundary_spec(build_hole_mesh(0), "D");
  CHECK(hole.count_boundary(BoundaryLabel::Scatterer) == 4);
  CHECK(hole.count_boundary(BoundaryLabel::Dirichlet) == 12);
  CHECK_THROWS_AS(apply_boundary_spec(m, "middle=D"), MeshError);
  CHECK_THROWS_AS(apply_boundary_spec(m, "Q"), MeshError);
}

TEST_CASE("point location") {
  const PolygonalMesh m = load_mesh(source_path("data/meshes/concave8.mesh"));
  const PointLocator loc(m);
  for (std::size_t k = 0; k < m.num_elements(); ++k) {
    // a point just inside the first edge, on the element's side
    const auto poly = element_polygon(m, k);
    const Vec2 t = poly[1] - poly[0];
    const Vec2 x = 0.5 * (poly[0] + poly[1]) + 1e-6 * Vec2(-t.y(), t.x()).normalized();
    CHECK(loc.locate(x) == static_cast<int>(k));
  }
  CHECK(loc.locate(Vec2(1.5, 0.5)) == -1);
  CHECK(PointLocator(build_hole_mesh(1)).locate(Vec2(0.5, 1.5)) == -1);
}

TEST_CASE("conformize inserts hanging nodes") {
  const std::vector<Vec2> v = {{0, 0}, {2, 0}, {2, 1}, {0, 1}, {1, 0}, {1, -1}, {0, -1}, {2, -1}};
  const auto els = conformize(v, {{0, 1, 2, 3}, {6, 5, 4, 0}, {5, 7, 1, 4}});
  CHECK(els[0] == std::vector<int>{0, 4, 1, 2, 3});
  check_invariants(PolygonalMesh(v, els), 4.0);
}
