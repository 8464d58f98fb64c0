#ifndef HYBRIDPROJ_REGION_HPP
#define HYBRIDPROJ_REGION_HPP

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "hybridproj/errors.hpp"

namespace hybridproj {

/// {z : <normal, z> <= offset}
struct HalfSpace {
  Eigen::VectorXd normal;
  double offset = 0.0;

  HalfSpace() = default;
  HalfSpace(Eigen::VectorXd n, double b) : normal(std::move(n)), offset(b) {
    if (normal.size() == 0 || normal.norm() == 0.0 ||
        !normal.allFinite() || !std::isfinite(offset))
      throw SemanticError("HalfSpace: normal must be nonzero and finite");
  }

  double violation(const Eigen::VectorXd& z) const {
    return normal.dot(z) - offset;
  }
  bool contains(const Eigen::VectorXd& z, double tol = 0.0) const {
    return violation(z) <= tol;
  }
};

/// Axis-aligned box, lower <= upper componentwise.
struct Box {
  Eigen::VectorXd lower, upper;

  Box() = default;
  Box(Eigen::VectorXd lo, Eigen::VectorXd hi)
      : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size() || ((upper - lower).array() < 0.0).any())
      throw SemanticError("Box: requires lower <= upper componentwise");
  }

  static Box cube(int dim, double half_width) {
    return Box(Eigen::VectorXd::Constant(dim, -half_width),
               Eigen::VectorXd::Constant(dim, half_width));
  }
  static Box ambient(int dim) { return cube(dim, 1e9); }

  int dim() const { return static_cast<int>(lower.size()); }
  Eigen::VectorXd clamp(const Eigen::VectorXd& z) const {
    return z.cwiseMax(lower).cwiseMin(upper);
  }
  bool contains(const Eigen::VectorXd& z, double tol = 0.0) const {
    return ((z - upper).array() <= tol).all() &&
           ((lower - z).array() <= tol).all();
  }
  double violation(const Eigen::VectorXd& z) const {
    return std::max((z - upper).maxCoeff(), (lower - z).maxCoeff());
  }
  Eigen::VectorXd center() const { return 0.5 * (lower + upper); }
  double diameter() const { return (upper - lower).norm(); }
};

/// (convex hull of hull_vertices) intersected with half-spaces and the
/// ambient box.  An empty vertex list means "no hull constraint": the
/// region is box ∩ half-spaces.
struct FeasibleRegion {
  std::vector<Eigen::VectorXd> hull_vertices;
  std::vector<HalfSpace> halfspaces;
  Box box;

  FeasibleRegion() = default;
  FeasibleRegion(std::vector<Eigen::VectorXd> verts, std::vector<HalfSpace> hs,
                 Box b)
      : hull_vertices(std::move(verts)),
        halfspaces(std::move(hs)),
        box(std::move(b)) {
    const int d = box.dim();
    for (const auto& v : hull_vertices)
      if (v.size() != d || !v.allFinite())
        throw DimensionError("FeasibleRegion: hull vertex dimension mismatch");
    for (const auto& h : halfspaces)
      if (h.normal.size() != d)
        throw DimensionError("FeasibleRegion: half-space dimension mismatch");
  }

  static FeasibleRegion from_halfspaces(std::vector<HalfSpace> hs, Box b) {
    return FeasibleRegion({}, std::move(hs), std::move(b));
  }

  int dim() const { return box.dim(); }
  bool has_hull() const { return !hull_vertices.empty(); }

  /// Worst violation of the linear constraints (box + half-spaces) only;
  /// hull membership needs a hull projection and lives in convex.hpp.
  double linear_violation(const Eigen::VectorXd& z) const {
    double v = box.violation(z);
    for (const auto& h : halfspaces) v = std::max(v, h.violation(z));
    return v;
  }

  /// Hull vertices stacked as columns of a d x m matrix.
  Eigen::MatrixXd vertex_matrix() const {
    Eigen::MatrixXd V(dim(), hull_vertices.size());
    for (size_t i = 0; i < hull_vertices.size(); ++i)
      V.col(static_cast<Eigen::Index>(i)) = hull_vertices[i];
    return V;
  }
};

}  // namespace hybridproj

#endif  // HYBRIDPROJ_REGION_HPP
