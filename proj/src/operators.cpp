#include "hybridproj/operators.hpp"

#include <cmath>

namespace hybridproj {

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::contraction_scale: return "contraction_scale";
    case OperatorKind::rotation: return "rotation";
    case OperatorKind::gk_truncated: return "gk_truncated";
    case OperatorKind::projection_onto_box: return "projection_onto_box";
    case OperatorKind::composite: return "composite";
  }
  return "?";
}

Eigen::VectorXd OperatorDomain::sample(std::mt19937_64& rng) const {
  const int d = dim();
  Eigen::VectorXd x(d);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (shape == Shape::box) {
    for (int i = 0; i < d; ++i)
      x[i] = bounds.lower[i] + unif(rng) * (bounds.upper[i] - bounds.lower[i]);
    return x;
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < d; ++i) x[i] = gauss(rng);
  const double n = x.norm();
  if (n == 0.0) return Eigen::VectorXd::Zero(d);
  const double r = radius * std::pow(unif(rng), 1.0 / d);
  return x * (r / n);
}

OperatorSpec OperatorSpec::contraction(int dim, double lambda) {
  if (dim < 1) throw DimensionError("contraction: dim must be >= 1");
  if (lambda < 0.0 || lambda > 1.0)
    throw SemanticError("contraction: lambda must lie in [0, 1]");
  OperatorSpec op;
  op.kind_ = OperatorKind::contraction_scale;
  op.lambda_ = lambda;
  op.domain_ = OperatorDomain::make_box(Box::cube(dim, 1.0));
  op.fixed_points_.push_back(Eigen::VectorXd::Zero(dim));
  return op;
}

OperatorSpec OperatorSpec::rotation(double theta, double radius) {
  OperatorSpec op;
  op.kind_ = OperatorKind::rotation;
  op.theta_ = theta;
  op.domain_ = OperatorDomain::make_ball(2, radius);
  op.fixed_points_.push_back(Eigen::VectorXd::Zero(2));
  return op;
}

OperatorSpec OperatorSpec::gk_truncated(int dim) {
  if (dim < 3) throw DimensionError("gk_truncated: dim must be >= 3");
  OperatorSpec op;
  op.kind_ = OperatorKind::gk_truncated;
  op.domain_ = OperatorDomain::make_ball(dim, 1.0);
  // weights a_2..a_{d-1} with product 1/2; T(x) = (0, x_1^2, a_2 x_2, ...)
  const double a = std::pow(0.5, 1.0 / static_cast<double>(dim - 2));
  op.gk_weights_.assign(static_cast<size_t>(dim - 2), a);
  op.fixed_points_.push_back(Eigen::VectorXd::Zero(dim));
  return op;
}

OperatorSpec OperatorSpec::box_projection(Box domain, Box target) {
  const int d = domain.dim();
  if (target.dim() != d)
    throw DimensionError("box_projection: domain/target dimension mismatch");
  if (!domain.contains(target.lower) || !domain.contains(target.upper))
    throw SemanticError("box_projection: target box must lie inside C");
  OperatorSpec op;
  op.kind_ = OperatorKind::projection_onto_box;
  op.domain_ = OperatorDomain::make_box(std::move(domain));
  op.target_ = std::move(target);
  op.fixed_points_.push_back(op.target_.center());
  if (d <= 4) {
    for (int mask = 0; mask < (1 << d); ++mask) {
      Eigen::VectorXd corner(d);
      for (int i = 0; i < d; ++i)
        corner[i] = (mask >> i) & 1 ? op.target_.upper[i] : op.target_.lower[i];
      op.fixed_points_.push_back(corner);
    }
  }
  return op;
}

OperatorSpec OperatorSpec::composite(double theta, double lambda,
                                     double radius) {
  if (lambda < 0.0 || lambda > 1.0)
    throw SemanticError("composite: lambda must lie in [0, 1]");
  OperatorSpec op;
  op.kind_ = OperatorKind::composite;
  op.theta_ = theta;
  op.lambda_ = lambda;
  op.domain_ = OperatorDomain::make_ball(2, radius);
  op.fixed_points_.push_back(Eigen::VectorXd::Zero(2));
  return op;
}

namespace {

Eigen::VectorXd rotate2(const Eigen::VectorXd& x, double angle) {
  Eigen::VectorXd y(2);
  const double c = std::cos(angle), s = std::sin(angle);
  y[0] = c * x[0] - s * x[1];
  y[1] = s * x[0] + c * x[1];
  return y;
}

}  // namespace

Eigen::VectorXd OperatorSpec::apply_once_unchecked(
    const Eigen::VectorXd& x) const {
  switch (kind_) {
    case OperatorKind::contraction_scale:
      return lambda_ * x;
    case OperatorKind::rotation:
      return rotate2(x, theta_);
    case OperatorKind::gk_truncated: {
      Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
      y[1] = x[0] * x[0];
      for (size_t i = 0; i < gk_weights_.size(); ++i)
        y[static_cast<Eigen::Index>(i) + 2] =
            gk_weights_[i] * x[static_cast<Eigen::Index>(i) + 1];
      return y;
    }
    case OperatorKind::projection_onto_box:
      return target_.clamp(x);
    case OperatorKind::composite:
      return lambda_ * rotate2(x, theta_);
  }
  return x;
}

Eigen::VectorXd OperatorSpec::apply(const Eigen::VectorXd& x) const {
  return apply_iterate(1, x);
}

Eigen::VectorXd OperatorSpec::apply_iterate(int n,
                                            const Eigen::VectorXd& x) const {
  if (n < 1) throw SemanticError("apply_iterate: n must be >= 1");
  if (x.size() != dim())
    throw DimensionError("apply_iterate: point dimension mismatch");
  if (!domain_.contains(x, 1e-8))
    throw DomainViolation("apply_iterate: point lies outside C");
  switch (kind_) {
    case OperatorKind::contraction_scale:
      return std::pow(lambda_, n) * x;
    case OperatorKind::rotation:
      return rotate2(x, n * theta_);
    case OperatorKind::projection_onto_box:
      return target_.clamp(x);  // idempotent: T^n = T
    case OperatorKind::composite:
      return std::pow(lambda_, n) * rotate2(x, n * theta_);
    case OperatorKind::gk_truncated: {
      if (n >= dim()) return Eigen::VectorXd::Zero(dim());  // nilpotent
      Eigen::VectorXd y = x;
      for (int i = 0; i < n; ++i) y = apply_once_unchecked(y);
      return y;
    }
  }
  return x;
}

double OperatorSpec::kn(int n) const {
  if (n < 1) throw SemanticError("kn: n must be >= 1");
  switch (kind_) {
    case OperatorKind::contraction_scale:
    case OperatorKind::composite:
    case OperatorKind::rotation:
    case OperatorKind::projection_onto_box:
      return 1.0;
    case OperatorKind::gk_truncated: {
      if (n == 1) return 2.0;  // the x_1^2 coordinate on [-1,1]
      if (n >= dim()) return 1.0;
      double prod = 2.0;
      for (int i = 0; i < n - 1; ++i) prod *= gk_weights_[static_cast<size_t>(i)];
      return std::max(1.0, prod);
    }
  }
  return 1.0;
}

double empirical_lipschitz(const Geometry& geom, const OperatorSpec& op, int n,
                           int pairs, std::uint64_t seed) {
  if (pairs < 100)
    throw SemanticError("empirical_lipschitz: pairs must be >= 100");
  if (geom.dim != op.dim())
    throw DimensionError("empirical_lipschitz: geometry/operator mismatch");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double local_scale = 1e-3 * op.domain().diameter();
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    const Eigen::VectorXd x = op.domain().sample(rng);
    Eigen::VectorXd y;
    if (k % 2 == 0) {
      y = op.domain().sample(rng);
    } else {
      Eigen::VectorXd delta(op.dim());
      for (int i = 0; i < op.dim(); ++i) delta[i] = gauss(rng);
      y = op.domain().clip(x + local_scale * delta);
    }
    const double denom = norm(geom, x - y);
    if (denom < 1e-14) continue;
    const double num =
        norm(geom, op.apply_iterate(n, x) - op.apply_iterate(n, y));
    worst = std::max(worst, num / denom);
  }
  return worst;
}

}  // namespace hybridproj
