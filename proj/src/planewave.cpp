#include "tvem/planewave.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace tvem {

DirectionSet equispaced_directions(int q) {
  if (q < 0) throw std::invalid_argument("plane wave degree must be nonnegative");
  DirectionSet set;
  set.q = q;
  const int p = 2 * q + 1;
  set.d.reserve(p);
  for (int l = 0; l < p; ++l) {
    const double angle = 2.0 * std::numbers::pi * l / p;
    set.d.emplace_back(std::cos(angle), std::sin(angle));
  }
  return set;
}

std::vector<int> hp_direction_order(int p_max) {
  std::vector<int> order;
  order.reserve(p_max);
  for (int l = 0; l < p_max; l += 2) order.push_back(l);
  for (int l = 1; l < p_max; l += 2) order.push_back(l);
  return order;
}

std::vector<Vec2> hp_directions(int q_max) {
  const DirectionSet base = equispaced_directions(q_max);
  std::vector<Vec2> out;
  for (int l : hp_direction_order(base.p())) out.push_back(base.d[l]);
  return out;
}

int edge_space_hp(const Edge& edge, const std::vector<int>& element_degree) {
  int q = element_degree.at(edge.elements[0]);
  if (!edge.is_boundary()) q = std::max(q, element_degree.at(edge.elements[1]));
  return 2 * q + 1;
}

cd phi(cd z) {
  if (std::abs(z) < 1e-3) {
    // 1 + z/2 + z^2/6 + z^3/24 + z^4/120, Horner form
    return 1.0 + z * (1.0 / 2.0 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0))));
  }
  const double x = z.real();
  const double y = z.imag();
  const double s = std::sin(0.5 * y);
  const cd em1(std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y));
  return em1 / z;
}

cd edge_exp_integral(const Vec2& a, const Vec2& b, const Vec2& kappa, const Vec2& origin) {
  const double h = (b - a).norm();
  const cd i(0.0, 1.0);
  return h * std::exp(i * kappa.dot(a - origin)) * phi(i * kappa.dot(b - a));
}

cd edge_pw_integral(const Vec2& a, const Vec2& b, const Vec2& d_l, const Vec2& d_j, double k) {
  return edge_exp_integral(a, b, k * (d_l - d_j), Vec2::Zero());
}

Eigen::MatrixXd edge_mass_matrix(const Vec2& a, const Vec2& b, const std::vector<Vec2>& dirs, double k) {
  const int n = static_cast<int>(dirs.size());
  const Vec2 ab = b - a;
  const double h = ab.norm();
  Eigen::MatrixXd G(n, n);
  for (int j = 0; j < n; ++j) {
    G(j, j) = h;
    for (int l = j + 1; l < n; ++l) {
      const double s = 0.5 * k * (dirs[l] - dirs[j]).dot(ab);
      const double sinc = std::abs(s) < 1e-4 ? 1.0 - s * s / 6.0 : std::sin(s) / s;
      G(j, l) = G(l, j) = h * sinc;
    }
  }
  return G;
}

FilteredTrace filter_directions(const Vec2& tangent, const std::vector<Vec2>& dirs, double tol) {
  const Vec2 t = tangent.normalized();
  FilteredTrace out;
  out.representative.assign(dirs.size(), -1);
  for (std::size_t j = 0; j < dirs.size(); ++j) {
    for (std::size_t r = 0; r < out.retained.size(); ++r) {
      if (std::abs((dirs[j] - dirs[out.retained[r]]).dot(t)) <= tol) {
        out.representative[j] = static_cast<int>(r);
        break;
      }
    }
    if (out.representative[j] < 0) {
      out.representative[j] = static_cast<int>(out.retained.size());
      out.retained.push_back(static_cast<int>(j));
    }
  }
  out.constant = std::none_of(dirs.begin(), dirs.end(), [&](const Vec2& d) { return std::abs(d.dot(t)) <= tol; });
  return out;
}

OrthonormalEdgeBasis orthonormalize_edge_basis(const Eigen::MatrixXd& G0, double sigma, bool scaled,
                                               double eig_scale) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G0);
  if (eig.info() != Eigen::Success) throw BasisError("edge Gram eigendecomposition failed");
  std::vector<int> keep;
  for (int i = 0; i < eig.eigenvalues().size(); ++i)
    if (eig.eigenvalues()(i) / eig_scale >= sigma) keep.push_back(i);
  if (keep.empty()) throw BasisError("every edge Gram eigenvalue lies below the tolerance");

  OrthonormalEdgeBasis out;
  out.sigma = sigma;
  out.scaled = scaled;
  const int n = static_cast<int>(keep.size());
  out.V.resize(G0.rows(), n);
  out.lambda.resize(n);
  for (int c = 0; c < n; ++c) {
    out.V.col(c) = eig.eigenvectors().col(keep[c]);
    out.lambda(c) = eig.eigenvalues()(keep[c]);
  }
  out.Q = out.V;
  if (scaled) out.Q *= out.lambda.cwiseSqrt().cwiseInverse().asDiagonal();
  return out;
}

EdgeBasis build_edge_basis(const Vec2& a, const Vec2& b, const std::vector<Vec2>& edge_dirs, double k,
                           const EdgeBasisOptions& options) {
  EdgeBasis out;
  const int pe = static_cast<int>(edge_dirs.size());
  if (options.kind == BasisKind::Filtered) {
    const FilteredTrace ft = filter_directions(b - a, edge_dirs);
    for (int j : ft.retained) out.raw.push_back(edge_dirs[j]);
    if (ft.constant) out.raw.push_back(Vec2::Zero());
    const int n = ft.size();
    out.Q = Eigen::MatrixXd::Identity(n, n);
    out.C = Eigen::MatrixXd::Zero(pe, n);
    for (int j = 0; j < pe; ++j) out.C(j, ft.representative[j]) = 1.0;
    out.gram = edge_mass_matrix(a, b, out.raw, k);
    out.gram_cond = symmetric_condition(out.gram);
    return out;
  }
  out.raw = edge_dirs;
  const Eigen::MatrixXd G0 = edge_mass_matrix(a, b, edge_dirs, k);
  const double scale = options.sigma_relative ? (b - a).norm() : 1.0;
  const OrthonormalEdgeBasis ob = orthonormalize_edge_basis(G0, options.sigma, options.scaled, scale);
  out.Q = ob.Q;
  if (options.scaled) {
    out.C = ob.V * ob.lambda.cwiseSqrt().asDiagonal();
    out.gram = Eigen::MatrixXd::Identity(ob.size(), ob.size());
    out.gram_cond = 1.0;
  } else {
    out.C = ob.V;
    out.gram = ob.lambda.asDiagonal();
    out.gram_cond = ob.lambda.maxCoeff() / ob.lambda.minCoeff();
  }
  return out;
}

double symmetric_condition(const Eigen::MatrixXd& m) {
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues();
  const double lo = ev.cwiseAbs().minCoeff();
  const double hi = ev.cwiseAbs().maxCoeff();
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

}  // namespace tvem
