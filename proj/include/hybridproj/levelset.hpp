#ifndef HYBRIDPROJ_LEVELSET_HPP
#define HYBRIDPROJ_LEVELSET_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "hybridproj/operators.hpp"
#include "hybridproj/projection.hpp"
#include "hybridproj/region.hpp"
#include "hybridproj/space.hpp"

namespace hybridproj {

struct SamplerConfig {
  int samples_per_round = 512;
  double importance_fraction = 0.5;
  std::uint64_t seed = 0;
  int max_hull_vertices = 0;  // 0 -> 16 * dim

  int hull_cap(int dim) const {
    return max_hull_vertices > 0 ? max_hull_vertices : 16 * dim;
  }
  void validate(int dim) const {
    if (samples_per_round < dim + 1)
      throw SemanticError("sampler: samples_per_round must be >= dim + 1");
    if (importance_fraction < 0.0 || importance_fraction > 1.0)
      throw SemanticError("sampler: importance_fraction must lie in [0, 1]");
    if (hull_cap(dim) < dim + 1)
      throw SemanticError("sampler: max_hull_vertices must be >= dim + 1");
  }
};

/// Threshold of the level condition ||z - T^n z|| <= t_n ||x_n - T^n x_n||.
struct LevelSetThreshold {
  double tn = 0.0;
  double residual = 0.0;
  double bound = 0.0;

  static LevelSetThreshold make(double tn, double residual) {
    if (!(tn > 0.0 && tn < 1.0))
      throw SemanticError("LevelSetThreshold: t_n must lie in (0, 1)");
    if (residual < 0.0)
      throw SemanticError("LevelSetThreshold: residual must be >= 0");
    return {tn, residual, tn * residual};
  }
};

/// Points z of prev_region (and of the operator domain C) satisfying the
/// level condition at power n.  Importance sampling concentrates around
/// the lowest-residual points found so far; `hot_starts` seeds that
/// archive (previous hull vertices, current iterates).  Deterministic
/// given cfg.seed and n.  Throws EmptyLevelSet after one doubled-budget
/// retry, carrying the lowest residual seen.
/// seed_salt distinguishes rounds that share the same power n (the
/// Matsushita-Takahashi scheme always evaluates T itself).
std::vector<Eigen::VectorXd> sample_level_set(
    const Geometry& geom, const FeasibleRegion& prev_region,
    const OperatorSpec& op, int n, const LevelSetThreshold& thr,
    const SamplerConfig& cfg,
    const std::vector<Eigen::VectorXd>& hot_starts = {},
    std::uint64_t seed_salt = 0);

/// Convex hull of the accepted points with interior points pruned: exact
/// for dim <= 3, greedy farthest-point selection capped at
/// cfg.max_hull_vertices above that.  Half-spaces are carried through
/// unchanged; the region box is the bounding box of the hull.
FeasibleRegion build_region(const Geometry& geom,
                            const std::vector<Eigen::VectorXd>& accepted,
                            const std::vector<HalfSpace>& halfspaces,
                            const SamplerConfig& cfg);

}  // namespace hybridproj

#endif  // HYBRIDPROJ_LEVELSET_HPP
