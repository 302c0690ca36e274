#pragma once

#include <array>
#include <vector>

#include "tvem/mesh.hpp"

namespace tvem {

/// Nodes and weights on [-1, 1].
struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
};

Rule1D gauss_legendre(int n);
/// n >= 2 points including both endpoints; exact for degree 2n-3.
Rule1D gauss_lobatto(int n);

/// Gauss-Lobatto points used for boundary data on an edge of length h.
int lobatto_points(double k, double h);

/// Composite Gauss-Lobatto rule on [0, 1] whose panels shrink geometrically
/// by `ratio` towards each listed point (parameters in [0, 1]). Integrands
/// with an algebraic singularity at such a point keep their accuracy.
Rule1D graded_lobatto(int n, const std::vector<double>& toward, double ratio = 0.15, int layers = 24);

struct QuadPoint {
  Vec2 x;
  double w;
};

using Triangle = std::array<Vec2, 3>;

/// Collapsed (Duffy) tensor Gauss-Legendre rule with n x n points; exact for
/// polynomials of degree 2n-2.
std::vector<QuadPoint> triangle_rule(const Triangle& t, int n);

/// Fan from the centroid when every fan triangle is positively oriented,
/// ear clipping otherwise.
std::vector<Triangle> triangulate_polygon(const std::vector<Vec2>& poly);

/// Splits every triangle into four by its edge midpoints, `levels` times.
std::vector<Triangle> refine_triangles(const std::vector<Triangle>& tris, int levels);

std::vector<QuadPoint> polygon_rule(const std::vector<Vec2>& poly, int n, int levels = 0);

}  // namespace tvem
