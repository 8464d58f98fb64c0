#ifndef HYBRIDPROJ_SPACE_HPP
#define HYBRIDPROJ_SPACE_HPP

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "hybridproj/errors.hpp"

namespace hybridproj {

/// Descriptor of the finite-dimensional space ell_p^d, 1 < p < infinity.
/// These spaces are uniformly convex and smooth, so the normalized duality
/// mapping is single-valued and the metric projection is well defined.
struct Geometry {
  int dim;
  double p;

  Geometry(int dim_, double p_) : dim(dim_), p(p_) {
    if (dim < 1) throw DimensionError("Geometry: dim must be >= 1");
    if (!(p > 1.0) || !std::isfinite(p))
      throw SemanticError("Geometry: exponent must satisfy 1 < p < infinity");
  }

  /// Dual exponent q with 1/p + 1/q = 1.
  double dual_exponent() const { return p / (p - 1.0); }

  bool euclidean() const { return p == 2.0; }
};

namespace detail {

// (sum |x_i|^e)^(1/e) with max-rescaling so extreme exponents neither
// overflow nor underflow.
template <typename Derived>
double lp_norm_raw(const Eigen::MatrixBase<Derived>& x, double e) {
  const double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    acc += std::pow(std::abs(x[i]) / m, e);
  return m * std::pow(acc, 1.0 / e);
}

}  // namespace detail

template <typename Derived>
void check_dim(const Geometry& geom, const Eigen::MatrixBase<Derived>& x,
               const char* where) {
  if (x.size() != geom.dim)
    throw DimensionError(std::string(where) + ": vector has dimension " +
                         std::to_string(x.size()) + ", geometry expects " +
                         std::to_string(geom.dim));
}

/// ||x||_p for the geometry's exponent.
template <typename Derived>
double norm(const Geometry& geom, const Eigen::MatrixBase<Derived>& x) {
  check_dim(geom, x, "norm");
  if (geom.euclidean()) return x.norm();
  return detail::lp_norm_raw(x, geom.p);
}

/// Norm in the dual space ell_q, q = p/(p-1).
template <typename Derived>
double dual_norm(const Geometry& geom, const Eigen::MatrixBase<Derived>& x) {
  check_dim(geom, x, "dual_norm");
  if (geom.euclidean()) return x.norm();
  return detail::lp_norm_raw(x, geom.dual_exponent());
}

/// Dual pairing <x, x*>; in coordinates just the dot product.
template <typename DA, typename DB>
double pairing(const Eigen::MatrixBase<DA>& x, const Eigen::MatrixBase<DB>& xs) {
  return x.dot(xs);
}

/// Normalized duality mapping J, single-valued since ell_p (1<p<inf) is
/// smooth.  Componentwise J(x)_i = ||x||^(2-p) |x_i|^(p-1) sign(x_i), which
/// satisfies <x, Jx> = ||x||_p^2 and ||Jx||_q = ||x||_p.  For p = 2 this is
/// the identity and the input is copied verbatim.
template <typename Derived>
Eigen::VectorXd duality_map(const Geometry& geom,
                            const Eigen::MatrixBase<Derived>& x) {
  check_dim(geom, x, "duality_map");
  if (geom.euclidean()) return x;
  const double nrm = detail::lp_norm_raw(x, geom.p);
  Eigen::VectorXd j = Eigen::VectorXd::Zero(x.size());
  if (nrm == 0.0) return j;  // J(0) = 0, forced by ||Jx||_q = ||x||_p
  // J_i = nrm * sign(x_i) * (|x_i|/nrm)^(p-1); the ratio form keeps the
  // power computation in [0,1].
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x[i]);
    if (a == 0.0) continue;  // 0^(p-1) := 0 also for p < 2
    const double mag = nrm * std::pow(a / nrm, geom.p - 1.0);
    j[i] = x[i] < 0.0 ? -mag : mag;
  }
  return j;
}

}  // namespace hybridproj

#endif  // HYBRIDPROJ_SPACE_HPP
