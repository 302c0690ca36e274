#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "tvem/mesh.hpp"

namespace tvem {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// p = 2q+1 equispaced unit directions, d_l at angle 2*pi*l/p (0-based).
struct DirectionSet {
  int q = 0;
  std::vector<Vec2> d;

  int p() const { return static_cast<int>(d.size()); }
};

DirectionSet equispaced_directions(int q);

/// 0-based permutation of {0..p_max-1}: even 0-based indices (the odd
/// 1-based ones) ascending, then odd 0-based ones ascending. Any prefix of
/// length 2q+1 selects a nested direction set.
std::vector<int> hp_direction_order(int p_max);

/// Directions of degree q_max rearranged by hp_direction_order; the first
/// 2q+1 entries form the degree-q set used on hp meshes.
std::vector<Vec2> hp_directions(int q_max);

/// Number of edge directions under the maximum rule.
int edge_space_hp(const Edge& edge, const std::vector<int>& element_degree);

/// (e^z - 1)/z with a series branch for small |z|.
cd phi(cd z);

/// Integral over the segment [a,b] of exp(i kappa . (x - origin)).
cd edge_exp_integral(const Vec2& a, const Vec2& b, const Vec2& kappa, const Vec2& origin);

/// Integral over [a,b] of exp(i k (d_l - d_j) . x).
cd edge_pw_integral(const Vec2& a, const Vec2& b, const Vec2& d_l, const Vec2& d_j, double k);

/// Real symmetric L2(e) Gram matrix of the edge traces exp(i k d . (x - x_e)),
/// (G)_{j,l} = (w_l, w_j). A zero direction stands for the constant function.
Eigen::MatrixXd edge_mass_matrix(const Vec2& a, const Vec2& b, const std::vector<Vec2>& dirs, double k);

struct FilteredTrace {
  std::vector<int> retained;        // indices into the direction list
  bool constant = false;            // constant function appended
  std::vector<int> representative;  // per direction: position in the basis of its trace

  int size() const { return static_cast<int>(retained.size()) + (constant ? 1 : 0); }
};

/// Removes directions whose tangential component repeats an earlier one and
/// appends the constant when no direction is normal to the edge.
FilteredTrace filter_directions(const Vec2& tangent, const std::vector<Vec2>& dirs, double tol = 1e-12);

struct OrthonormalEdgeBasis {
  Eigen::MatrixXd Q;       // p x p_hat
  Eigen::VectorXd lambda;  // retained eigenvalues
  Eigen::MatrixXd V;       // retained eigenvectors
  double sigma = 0.0;
  bool scaled = true;

  int size() const { return static_cast<int>(Q.cols()); }
};

class BasisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Eigendecomposition of G0, dropping eigenpairs with |lambda| < sigma
/// (after dividing by `eig_scale`). Scaled columns satisfy Q^T G0 Q = I.
OrthonormalEdgeBasis orthonormalize_edge_basis(const Eigen::MatrixXd& G0, double sigma, bool scaled = true,
                                               double eig_scale = 1.0);

enum class BasisKind { Filtered, Orthonormal };

struct EdgeBasisOptions {
  BasisKind kind = BasisKind::Orthonormal;
  double sigma = 1e-13;
  bool sigma_relative = false;
  bool scaled = true;
};

/// Edge trace space in a common form for both pipelines. The basis
/// functions are w_hat_eta = sum_rho Q(rho,eta) w_rho over `raw`
/// directions, and the traces of the edge directions expand as
/// w_j = sum_eta C(j,eta) w_hat_eta.
struct EdgeBasis {
  std::vector<Vec2> raw;
  Eigen::MatrixXd Q;
  Eigen::MatrixXd C;
  Eigen::MatrixXd gram;  // Q^T G0 Q
  double gram_cond = 1.0;

  int size() const { return static_cast<int>(Q.cols()); }
};

EdgeBasis build_edge_basis(const Vec2& a, const Vec2& b, const std::vector<Vec2>& edge_dirs, double k,
                           const EdgeBasisOptions& options);

/// 2-norm condition number of a symmetric matrix.
double symmetric_condition(const Eigen::MatrixXd& m);

}  // namespace tvem
