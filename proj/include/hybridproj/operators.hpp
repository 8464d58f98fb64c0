#ifndef HYBRIDPROJ_OPERATORS_HPP
#define HYBRIDPROJ_OPERATORS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hybridproj/region.hpp"
#include "hybridproj/space.hpp"

namespace hybridproj {

enum class OperatorKind {
  contraction_scale,
  rotation,
  gk_truncated,
  projection_onto_box,
  composite
};

std::string to_string(OperatorKind kind);

/// Bounded closed convex domain C: a box or an origin-centered ball.
struct OperatorDomain {
  enum class Shape { box, ball };
  Shape shape = Shape::box;
  Box bounds;          // the box itself, or the enclosing box of the ball
  double radius = 1.0; // ball only

  static OperatorDomain make_box(Box b) {
    OperatorDomain d;
    d.shape = Shape::box;
    d.bounds = std::move(b);
    return d;
  }
  static OperatorDomain make_ball(int dim, double r) {
    OperatorDomain d;
    d.shape = Shape::ball;
    d.radius = r;
    d.bounds = Box::cube(dim, r);
    return d;
  }

  int dim() const { return bounds.dim(); }
  bool contains(const Eigen::VectorXd& x, double tol = 0.0) const {
    if (shape == Shape::box) return bounds.contains(x, tol);
    return x.norm() <= radius + tol;
  }
  /// Nearest point of C (Euclidean clip).
  Eigen::VectorXd clip(const Eigen::VectorXd& x) const {
    if (shape == Shape::box) return bounds.clamp(x);
    const double n = x.norm();
    return n <= radius ? x : Eigen::VectorXd(x * (radius / n));
  }
  double diameter() const { return bounds.diameter(); }
  Eigen::VectorXd sample(std::mt19937_64& rng) const;
};

/// A test mapping T : C -> C with computable iterates T^n, a declared
/// asymptotic Lipschitz sequence k_n, and (where known) its fixed points.
class OperatorSpec {
 public:
  static OperatorSpec contraction(int dim, double lambda);
  static OperatorSpec rotation(double theta, double radius = 4.0);
  static OperatorSpec gk_truncated(int dim);
  static OperatorSpec box_projection(Box domain, Box target);
  static OperatorSpec composite(double theta, double lambda,
                                double radius = 2.0);

  OperatorKind kind() const { return kind_; }
  int dim() const { return domain_.dim(); }
  const OperatorDomain& domain() const { return domain_; }
  const std::vector<Eigen::VectorXd>& known_fixed_points() const {
    return fixed_points_;
  }

  /// T x (no iterate).  Equivalent to apply_iterate(1, x).
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;

  /// T^n x, using closed forms where the mapping admits one.  Requires
  /// x in C within 1e-8 (DomainViolation otherwise) and n >= 1.
  Eigen::VectorXd apply_iterate(int n, const Eigen::VectorXd& x) const;

  /// Declared asymptotic Lipschitz constant k_n >= 1, k_n -> 1.
  double kn(int n) const;

  bool nonexpansive() const { return kn(1) <= 1.0; }

  double lambda() const { return lambda_; }
  double theta() const { return theta_; }

 private:
  OperatorSpec() = default;
  Eigen::VectorXd apply_once_unchecked(const Eigen::VectorXd& x) const;

  OperatorKind kind_ = OperatorKind::contraction_scale;
  OperatorDomain domain_;
  std::vector<Eigen::VectorXd> fixed_points_;
  double lambda_ = 1.0;              // contraction / composite
  double theta_ = 0.0;               // rotation / composite
  std::vector<double> gk_weights_;   // gk_truncated: a_2 .. a_{d-1}
  Box target_;                       // projection_onto_box
};

/// Brute-force estimate of the Lipschitz constant of T^n over `pairs`
/// sampled pairs in C (half independent, half local perturbations).
/// Deterministic given the seed; requires pairs >= 100.
double empirical_lipschitz(const Geometry& geom, const OperatorSpec& op, int n,
                           int pairs, std::uint64_t seed);

}  // namespace hybridproj

#endif  // HYBRIDPROJ_OPERATORS_HPP
