#ifndef HYBRIDPROJ_PROJECTION_HPP
#define HYBRIDPROJ_PROJECTION_HPP

#include <Eigen/Dense>
#include <cstdint>

#include "hybridproj/convex.hpp"
#include "hybridproj/region.hpp"
#include "hybridproj/space.hpp"

namespace hybridproj {

struct ProjectionResult {
  Eigen::VectorXd point;
  Eigen::VectorXd weights;  // simplex weights over hull vertices; empty if no hull
  double vi_residual = 0.0;
  int iterations = 0;
};

/// Metric projection of `anchor` onto the region in the ell_p norm of
/// `geom`.  Minimizes ||y - anchor||_p over (hull ∩ half-spaces ∩ box) by
/// projected gradient over simplex weights (hull case) or coordinates
/// (half-space/box case), with Dykstra supplying the Euclidean feasibility
/// projection at every step.  The ell_p ball is strictly convex for
/// 1 < p < inf, so the minimizer is unique.
///
/// Throws InfeasibleRegion when no feasible point can be produced and
/// NonConvergence when the iteration budget runs out far from optimality.
ProjectionResult project(const Geometry& geom, const FeasibleRegion& region,
                         const Eigen::VectorXd& anchor, double tol = 1e-8,
                         int max_iter = 100000);

/// Independent Euclidean (p = 2) projection oracle: Dykstra in coordinate
/// space alternating between the hull (via Wolfe's nearest-point routine),
/// each half-space, and the box.  Intended for tests; supports at most 32
/// half-spaces and 64 hull vertices.
Eigen::VectorXd euclidean_oracle(const FeasibleRegion& region,
                                 const Eigen::VectorXd& anchor);

/// Optimality certificate: min over all hull vertices plus `samples`
/// random feasible points y of <candidate - y, J(anchor - candidate)>.
/// Nonnegative (up to tolerance) iff candidate is the metric projection.
/// Deterministic given the seed.
double vi_certificate(const Geometry& geom, const FeasibleRegion& region,
                      const Eigen::VectorXd& candidate,
                      const Eigen::VectorXd& anchor, int samples,
                      std::uint64_t seed);

}  // namespace hybridproj

#endif  // HYBRIDPROJ_PROJECTION_HPP
