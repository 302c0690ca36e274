#pragma once

// Brute-force quadrature references shared by the unit tests and the
// acceptance run. They sample the plane waves at quadrature nodes and never
// use the closed-form edge integrals of the library.

#include <numbers>
#include <random>
#include <vector>

#include "tvem/assembly.hpp"
#include "tvem/quadrature.hpp"

namespace tvem::oracle {

struct EdgeNodes {
  std::vector<Vec2> x;
  Eigen::VectorXd w;
};

/// Composite Gauss-Legendre nodes on the segment [a, b].
inline EdgeNodes edge_nodes(const Vec2& a, const Vec2& b, int panels = 8, int points = 24) {
  const Rule1D r = gauss_legendre(points);
  const double h = (b - a).norm();
  EdgeNodes n;
  n.w.resize(panels * points);
  for (int s = 0; s < panels; ++s)
    for (int i = 0; i < points; ++i) {
      const double t = (s + 0.5 * (r.x[i] + 1.0)) / panels;
      n.x.push_back(a + t * (b - a));
      n.w(s * points + i) = 0.5 * r.w[i] * h / panels;
    }
  return n;
}

/// W(i, l) = exp(i k d_l . (x_i - origin)); a zero direction gives 1.
inline CMatrix waves(const std::vector<Vec2>& x, const std::vector<Vec2>& dirs, double k, const Vec2& origin) {
  CMatrix W(x.size(), dirs.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t l = 0; l < dirs.size(); ++l) W(i, l) = std::exp(cd(0.0, k * dirs[l].dot(x[i] - origin)));
  return W;
}

/// Volume form int_K grad w_l . conj(grad w_j) - k^2 w_l conj(w_j) at (j, l).
inline CMatrix volume_G(const PolygonalMesh& mesh, int K, const std::vector<Vec2>& dirs, double k) {
  const auto pts = polygon_rule(element_polygon(mesh, K), 20, 1);
  std::vector<Vec2> x;
  Eigen::VectorXd w(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    x.push_back(pts[i].x);
    w(i) = pts[i].w;
  }
  const CMatrix W = waves(x, dirs, k, mesh.elements()[K].centroid);
  const CMatrix M = W.adjoint() * w.asDiagonal() * W;  // M(j,l) = int w_l conj(w_j)
  CMatrix G(dirs.size(), dirs.size());
  for (std::size_t j = 0; j < dirs.size(); ++j)
    for (std::size_t l = 0; l < dirs.size(); ++l) G(j, l) = k * k * (dirs[l].dot(dirs[j]) - 1.0) * M(j, l);
  return G;
}

/// Edge basis traces H(i, eta) = w_hat_eta(x_i).
inline CMatrix hat_traces(const EdgeBasis& basis, const Edge& edge, const EdgeNodes& n, double k) {
  return waves(n.x, basis.raw, k, edge.midpoint) * basis.Q.cast<cd>();
}

/// D(row (s, eta), l) = (1/h_s) int_{e_s} w_l conj(w_hat_eta).
inline CMatrix quadrature_D(const DiscreteSpace& space, int K) {
  const PolygonalMesh& mesh = *space.mesh;
  const auto& el = mesh.elements()[K];
  const auto& dirs = space.element_dirs[K];
  std::vector<CMatrix> blocks;
  int rows = 0;
  for (int e : el.edges) {
    const Edge& edge = mesh.edges()[e];
    const EdgeNodes n = edge_nodes(mesh.vertices()[edge.vertices[0]], mesh.vertices()[edge.vertices[1]]);
    const CMatrix H = hat_traces(space.edge_basis[e], edge, n, space.k);
    const CMatrix W = waves(n.x, dirs, space.k, el.centroid);
    blocks.push_back(H.adjoint() * n.w.asDiagonal() * W / edge.length);
    rows += static_cast<int>(blocks.back().rows());
  }
  CMatrix D(rows, dirs.size());
  int r = 0;
  for (const auto& b : blocks) {
    D.middleRows(r, b.rows()) = b;
    r += static_cast<int>(b.rows());
  }
  return D;
}

/// B through its defining action: a virtual function v with DOF vector x has
/// B x = (int_{dK} v conj(dn w_j))_j. For v with trace w_hat_eta on one edge
/// and zero on the others, x is column eta of gram/h on that edge. Returns
/// the integrals (p x n_K) and the block diagonal DOF matrix (n_K x n_K), so
/// that B * dofs must equal integrals without inverting anything.
inline std::pair<CMatrix, CMatrix> quadrature_B_action(const DiscreteSpace& space, int K) {
  const PolygonalMesh& mesh = *space.mesh;
  const auto& el = mesh.elements()[K];
  const auto& dirs = space.element_dirs[K];
  int nK = 0;
  for (int e : el.edges) nK += space.edge_size(e);
  CMatrix integrals(dirs.size(), nK), dofs = CMatrix::Zero(nK, nK);
  int c = 0;
  for (int e : el.edges) {
    const Edge& edge = mesh.edges()[e];
    const EdgeNodes n = edge_nodes(mesh.vertices()[edge.vertices[0]], mesh.vertices()[edge.vertices[1]]);
    const Vec2 normal = outward_normal(mesh, K, e);
    const CMatrix H = hat_traces(space.edge_basis[e], edge, n, space.k);
    CMatrix dW = waves(n.x, dirs, space.k, el.centroid);
    for (std::size_t j = 0; j < dirs.size(); ++j) dW.col(j) *= cd(0.0, space.k * dirs[j].dot(normal));
    const int m = static_cast<int>(H.cols());
    integrals.middleCols(c, m) = dW.adjoint() * n.w.asDiagonal() * H;
    dofs.block(c, c, m, m) = H.adjoint() * n.w.asDiagonal() * H / edge.length;
    c += m;
  }
  return {integrals, dofs};
}

/// (G0)_{j,l} = int_e w_l conj(w_j) with waves centred at the midpoint.
inline Eigen::MatrixXd quadrature_G0(const Vec2& a, const Vec2& b, const std::vector<Vec2>& dirs, double k) {
  const EdgeNodes n = edge_nodes(a, b);
  const CMatrix W = waves(n.x, dirs, k, 0.5 * (a + b));
  return (W.adjoint() * n.w.asDiagonal() * W).real();
}

/// Star-shaped random polygon, counterclockwise, 3..8 vertices.
inline std::vector<Vec2> random_polygon(std::mt19937& rng, const Vec2& center = Vec2(0.3, -0.2)) {
  std::uniform_int_distribution<int> nv(3, 8);
  std::uniform_real_distribution<double> radius(0.25, 0.7), jitter(-0.3, 0.3);
  const int n = nv(rng);
  std::vector<Vec2> poly;
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * std::numbers::pi * (i + 0.5 + jitter(rng)) / n;
    poly.push_back(center + radius(rng) * Vec2(std::cos(t), std::sin(t)));
  }
  return poly;
}

inline PolygonalMesh single_element(const std::vector<Vec2>& poly) {
  std::vector<int> ids(poly.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  return PolygonalMesh(poly, {ids});
}

template <class M1, class M2>
double max_rel(const M1& a, const M2& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(static_cast<double>(b.cwiseAbs().maxCoeff()), 1e-300);
}

}  // namespace tvem::oracle
