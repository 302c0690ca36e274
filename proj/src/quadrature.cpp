#include "tvem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tvem {

namespace {

// P_n(x) and P_{n-1}(x) by the three-term recurrence
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int j = 2; j <= n; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

double cross(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

}  // namespace

Rule1D gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs n >= 1");
  Rule1D r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const auto [p, pm1] = legendre(n, x);
      dp = n * (x * p - pm1) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [p, pm1] = legendre(n, x);
    dp = n * (x * p - pm1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = r.w[n - 1 - i] = w;
  }
  return r;
}

Rule1D gauss_lobatto(int n) {
  if (n < 2) throw std::invalid_argument("Gauss-Lobatto rule needs n >= 2");
  const int N = n - 1;
  Rule1D r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i <= N; ++i) {
    double x = -std::cos(std::numbers::pi * i / N);
    for (int it = 0; it < 100; ++it) {
      const auto [p, pm1] = legendre(N, x);
      const double dx = (x * p - pm1) / ((N + 1) * p);
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double p = legendre(N, x).first;
    r.x[i] = x;
    r.w[i] = 2.0 / (N * (N + 1) * p * p);
  }
  return r;
}

int lobatto_points(double k, double h) {
  return std::max(16, static_cast<int>(std::ceil(k * h)) + 20);
}

Rule1D graded_lobatto(int n, const std::vector<double>& toward, double ratio, int layers) {
  std::vector<double> cuts{0.0, 1.0};
  for (double t : toward) {
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("grading point outside [0, 1]");
    cuts.push_back(t);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto graded_end = [&](double t) {
    return std::any_of(toward.begin(), toward.end(), [t](double s) { return s == t; });
  };
  // panel breakpoints of every piece between consecutive cuts
  std::vector<double> breaks;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    std::vector<double> piece{a, b};
    const bool left = graded_end(a), right = graded_end(b);
    const double len = (left && right) ? 0.5 * (b - a) : b - a;
    for (int l = 1; l <= layers; ++l) {
      const double d = len * std::pow(ratio, l);
      if (left) piece.push_back(a + d);
      if (right) piece.push_back(b - d);
    }
    if (left && right) piece.push_back(0.5 * (a + b));
    breaks.insert(breaks.end(), piece.begin(), piece.end());
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  const Rule1D base = gauss_lobatto(n);
  Rule1D r;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = breaks[i + 1];
    for (int j = 0; j < n; ++j) {
      r.x.push_back(a + 0.5 * (base.x[j] + 1.0) * (b - a));
      r.w.push_back(0.5 * (b - a) * base.w[j]);
    }
  }
  return r;
}

std::vector<QuadPoint> triangle_rule(const Triangle& t, int n) {
  const Rule1D g = gauss_legendre(n);
  const double area2 = cross(t[0], t[1], t[2]);
  std::vector<QuadPoint> out;
  out.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (g.x[i] + 1.0);
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (g.x[j] + 1.0);
      const Vec2 x = t[0] + u * ((t[1] - t[0]) + v * (t[2] - t[1]));
      out.push_back({x, 0.25 * g.w[i] * g.w[j] * u * area2});
    }
  }
  return out;
}

std::vector<Triangle> triangulate_polygon(const std::vector<Vec2>& poly) {
  const std::size_t n = poly.size();
  std::vector<Triangle> tris;
  if (n == 3) return {{poly[0], poly[1], poly[2]}};
  const double area = polygon_signed_area(poly);
  const Vec2 c = polygon_centroid(poly);
  bool star = true;
  for (std::size_t i = 0; i < n && star; ++i)
    star = cross(c, poly[i], poly[(i + 1) % n]) > 1e-12 * area;
  if (star) {
    for (std::size_t i = 0; i < n; ++i) tris.push_back({c, poly[i], poly[(i + 1) % n]});
    return tris;
  }

  std::vector<Vec2> ring = poly;
  const double eps = 1e-14 * area;
  while (ring.size() > 3) {
    const std::size_t m = ring.size();
    bool clipped = false;
    for (std::size_t i = 0; i < m; ++i) {
      const Vec2& a = ring[(i + m - 1) % m];
      const Vec2& b = ring[i];
      const Vec2& d = ring[(i + 1) % m];
      if (cross(a, b, d) <= eps) continue;
      bool blocked = false;
      for (std::size_t j = 0; j < m && !blocked; ++j) {
        if (j == i || j == (i + 1) % m || j == (i + m - 1) % m) continue;
        const Vec2& x = ring[j];
        if ((x - a).norm() == 0.0 || (x - d).norm() == 0.0) continue;
        blocked = cross(a, b, x) >= -eps && cross(b, d, x) >= -eps && cross(d, a, x) >= -eps;
      }
      if (blocked) continue;
      tris.push_back({a, b, d});
      ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped) throw MeshError("ear clipping failed: polygon is not simple");
  }
  tris.push_back({ring[0], ring[1], ring[2]});
  return tris;
}

std::vector<Triangle> refine_triangles(const std::vector<Triangle>& tris, int levels) {
  std::vector<Triangle> cur = tris;
  for (int l = 0; l < levels; ++l) {
    std::vector<Triangle> next;
    next.reserve(cur.size() * 4);
    for (const auto& t : cur) {
      const Vec2 m01 = 0.5 * (t[0] + t[1]), m12 = 0.5 * (t[1] + t[2]), m20 = 0.5 * (t[2] + t[0]);
      next.push_back({t[0], m01, m20});
      next.push_back({m01, t[1], m12});
      next.push_back({m20, m12, t[2]});
      next.push_back({m01, m12, m20});
    }
    cur = std::move(next);
  }
  return cur;
}

std::vector<QuadPoint> polygon_rule(const std::vector<Vec2>& poly, int n, int levels) {
  std::vector<QuadPoint> out;
  for (const auto& t : refine_triangles(triangulate_polygon(poly), levels)) {
    auto pts = triangle_rule(t, n);
    out.insert(out.end(), pts.begin(), pts.end());
  }
  return out;
}

}  // namespace tvem
