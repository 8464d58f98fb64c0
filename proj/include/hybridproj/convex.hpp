#ifndef HYBRIDPROJ_CONVEX_HPP
#define HYBRIDPROJ_CONVEX_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "hybridproj/region.hpp"

// Euclidean building blocks shared by the projection solver, the test
// oracle and the level-set sampler: simplex projection, Wolfe's nearest
// point in a convex hull, and Dykstra's alternating projections.

namespace hybridproj {

/// Euclidean projection onto {w >= 0, sum w = 1}.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& w);

struct HullProjection {
  Eigen::VectorXd point;    // closest point of conv(V) to the query
  Eigen::VectorXd weights;  // simplex weights over the columns of V
  double distance = 0.0;    // Euclidean distance
};

/// Nearest point of conv(columns of V) to x, via Wolfe's min-norm-point
/// algorithm applied to the shifted points V.col(i) - x.
HullProjection project_to_hull(const Eigen::MatrixXd& V,
                               const Eigen::VectorXd& x);

using Projector = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Euclidean projection of a point onto a single half-space.
Eigen::VectorXd project_to_halfspace(const HalfSpace& h,
                                     const Eigen::VectorXd& z);

/// Dykstra's algorithm: Euclidean projection onto the intersection of the
/// given sets (each supplied as its exact projector).  Returns the iterate
/// after the per-cycle displacement drops below tol or the budget runs out.
Eigen::VectorXd dykstra(const Eigen::VectorXd& start,
                        const std::vector<Projector>& sets, double tol,
                        int max_cycles, int* cycles_used = nullptr);

/// Worst constraint violation of z against the full region, hull included
/// (hull distance measured in the Euclidean norm).
double region_violation(const FeasibleRegion& region, const Eigen::VectorXd& z);

bool region_contains(const FeasibleRegion& region, const Eigen::VectorXd& z,
                     double tol);

}  // namespace hybridproj

#endif  // HYBRIDPROJ_CONVEX_HPP
