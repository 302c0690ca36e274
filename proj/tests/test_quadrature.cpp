#include <cmath>
#include <numbers>

#include "doctest.h"
#include "tvem/quadrature.hpp"

using namespace tvem;

namespace {

double integrate(const Rule1D& r, auto f) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(r.x[i]);
  return s;
}

}  // namespace

TEST_CASE("gauss rules on [-1,1]") {
  for (int n : {1, 2, 5, 16, 40}) {
    const Rule1D g = gauss_legendre(n);
    for (int deg = 0; deg <= 2 * n - 1; ++deg)
      CHECK(integrate(g, [&](double x) { return std::pow(x, deg); }) ==
            doctest::Approx(deg % 2 ? 0.0 : 2.0 / (deg + 1)).epsilon(1e-13));
  }
  for (int n : {2, 3, 8, 24}) {
    const Rule1D l = gauss_lobatto(n);
    CHECK(l.x.front() == -1.0);
    CHECK(l.x.back() == 1.0);
    for (int deg = 0; deg <= 2 * n - 3; ++deg)
      CHECK(integrate(l, [&](double x) { return std::pow(x, deg); }) ==
            doctest::Approx(deg % 2 ? 0.0 : 2.0 / (deg + 1)).epsilon(1e-13));
  }
}

TEST_CASE("lobatto order rule") {
  CHECK(lobatto_points(1.0, 0.1) == 21);
  CHECK(lobatto_points(20.0, 0.125) == 23);
  CHECK(lobatto_points(40.0, 1.0) == 60);
  CHECK(lobatto_points(200.0, 1.0) > lobatto_points(40.0, 1.0));
}

TEST_CASE("graded lobatto resolves endpoint and interior singularities") {
  const Rule1D end = graded_lobatto(16, {0.0});
  double wsum = 0.0;
  for (double w : end.w) wsum += w;
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
  // x^{-1/3} and x^{2/3} on [0,1]; a node on the singular point contributes 0
  const auto f = [](double x) { return x > 0 ? std::pow(x, -1.0 / 3.0) : 0.0; };
  CHECK(integrate(end, f) == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(integrate(end, [](double x) { return std::pow(x, 2.0 / 3.0); }) == doctest::Approx(0.6).epsilon(1e-13));
  const Rule1D mid = graded_lobatto(16, {0.3});
  const auto g = [](double x) { return x != 0.3 ? std::pow(std::abs(x - 0.3), -1.0 / 3.0) : 0.0; };
  CHECK(integrate(mid, g) == doctest::Approx(1.5 * (std::pow(0.3, 2.0 / 3.0) + std::pow(0.7, 2.0 / 3.0))).epsilon(1e-9));
}

TEST_CASE("triangle and polygon rules") {
  const Triangle t = {Vec2(0.1, 0.2), Vec2(1.3, 0.4), Vec2(0.2, 1.1)};
  const double area = 0.5 * std::abs((t[1] - t[0]).x() * (t[2] - t[0]).y() - (t[1] - t[0]).y() * (t[2] - t[0]).x());
  for (int n : {1, 4, 12}) {
    double s = 0.0;
    for (const auto& p : triangle_rule(t, n)) s += p.w;
    CHECK(s == doctest::Approx(area).epsilon(1e-14));
  }
  // x^a y^b over the unit square, polynomial degree up to 2n-2
  const std::vector<Vec2> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; a + b <= 8; ++b) {
      double s = 0.0;
      for (const auto& p : polygon_rule(square, 5)) s += p.w * std::pow(p.x.x(), a) * std::pow(p.x.y(), b);
      CHECK(s == doctest::Approx(1.0 / ((a + 1) * (b + 1))).epsilon(1e-13));
    }
  // non-star-shaped C polygon falls back to ear clipping
  const std::vector<Vec2> c = {{0, 0}, {1, 0}, {1, .3}, {.3, .3}, {.3, .7}, {1, .7}, {1, 1}, {0, 1}};
  const auto tris = triangulate_polygon(c);
  CHECK(tris.size() == c.size() - 2);
  double area_c = 0.0;
  for (const auto& p : polygon_rule(c, 3)) area_c += p.w;
  CHECK(area_c == doctest::Approx(1.0 - 0.7 * 0.4).epsilon(1e-14));
  CHECK(refine_triangles(tris, 2).size() == 16 * tris.size());
}
