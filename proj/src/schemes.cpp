#include "hybridproj/schemes.hpp"

#include <cmath>
#include <limits>

#include "hybridproj/convex.hpp"

namespace hybridproj {

std::string to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::nested: return "nested";
    case SchemeKind::mt: return "mt";
    case SchemeKind::nt: return "nt";
  }
  return "?";
}

Schedule Schedule::harmonic(double c, double c_prime) {
  if (!(c > 0.0) || !(c_prime > 0.0) || c > c_prime)
    throw SemanticError("harmonic schedule needs 0 < c <= c_prime");
  Schedule s;
  s.kind = Kind::harmonic;
  s.c = c;
  s.c_prime = c_prime;
  return s;
}

Schedule Schedule::geometric(double c, double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0) || !(c > 0.0) || c * ratio >= 1.0)
    throw SemanticError("geometric schedule needs 0 < r < 1 and c*r < 1");
  Schedule s;
  s.kind = Kind::geometric;
  s.c = c;
  s.ratio = ratio;
  return s;
}

Schedule Schedule::constant_alpha(double alpha) {
  if (alpha < 0.0 || alpha >= 1.0)
    throw SemanticError("alpha schedule needs alpha in [0, 1)");
  Schedule s;
  s.kind = Kind::constant_alpha;
  s.alpha = alpha;
  return s;
}

double Schedule::t(int n) const {
  if (n < 1) throw SemanticError("Schedule::t: n must be >= 1");
  switch (kind) {
    case Kind::harmonic:
      return c / (static_cast<double>(n) + c_prime);
    case Kind::geometric:
      return c * std::pow(ratio, n);
    case Kind::constant_alpha:
      throw SemanticError("Schedule::t: alpha schedule has no t_n");
  }
  return 0.0;
}

double Schedule::alpha_at(int n) const {
  (void)n;
  if (kind != Kind::constant_alpha)
    throw SemanticError("Schedule::alpha_at: not an alpha schedule");
  return alpha;
}

HalfSpace make_dn_halfspace(const Geometry& geom, const Eigen::VectorXd& xn,
                            const Eigen::VectorXd& anchor) {
  check_dim(geom, xn, "make_dn_halfspace");
  check_dim(geom, anchor, "make_dn_halfspace");
  const Eigen::VectorXd j = duality_map(geom, anchor - xn);
  if (j.lpNorm<Eigen::Infinity>() < 1e-15)
    throw DegenerateHalfSpace("make_dn_halfspace: anchor coincides with x_n");
  return HalfSpace(j, xn.dot(j));
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

FeasibleRegion domain_region(const OperatorSpec& op) {
  return FeasibleRegion::from_halfspaces({}, op.domain().bounds);
}

void append_row(SchemeState& state, const Geometry& geom,
                const OperatorSpec& op, int hull_count, int proj_iters,
                double vi_residual,
                const std::vector<HalfSpace>& extra_halfspaces = {}) {
  TraceRow row;
  row.n = state.n;
  row.x = state.current;
  const int power = std::max(state.n, 1);
  const Eigen::VectorXd tx = op.apply(state.current);
  row.res_T = norm(geom, state.current - tx);
  row.res_Tn = power == 1
                   ? row.res_T
                   : norm(geom, state.current - op.apply_iterate(power, state.current));
  row.anchor_dist = norm(geom, state.anchor - state.current);
  row.hull_count = hull_count;
  row.proj_iters = proj_iters;
  row.vi_residual = vi_residual;

  const auto& fixed = op.known_fixed_points();
  if (fixed.empty()) {
    row.fixed_dist = kNaN;
    row.dn_violation = kNaN;
    row.fixed_hull_dist = kNaN;
  } else {
    double dist = std::numeric_limits<double>::infinity();
    double viol = 0.0;
    double hull_dist = 0.0;
    const bool hull = state.has_region && state.cn_region.has_hull();
    const Eigen::MatrixXd V =
        hull ? state.cn_region.vertex_matrix() : Eigen::MatrixXd();
    for (const auto& u : fixed) {
      dist = std::min(dist, norm(geom, state.current - u));
      for (const auto& h : state.dn_halfspaces)
        viol = std::max(viol, h.violation(u));
      for (const auto& h : extra_halfspaces) viol = std::max(viol, h.violation(u));
      if (hull) hull_dist = std::max(hull_dist, project_to_hull(V, u).distance);
    }
    row.fixed_dist = dist;
    row.dn_violation = viol;
    row.fixed_hull_dist = hull ? hull_dist : kNaN;
  }
  state.trace.rows.push_back(std::move(row));
}

}  // namespace

SchemeState init_state(const Geometry& geom, const OperatorSpec& op,
                       const Eigen::VectorXd& anchor, SchemeKind kind) {
  check_dim(geom, anchor, "init_state");
  if (geom.dim != op.dim())
    throw DimensionError("init_state: geometry/operator dimension mismatch");
  if (!op.domain().contains(anchor, 1e-8))
    throw DomainViolation("init_state: anchor must lie in C");
  SchemeState state;
  state.n = kind == SchemeKind::nt ? 0 : 1;
  state.anchor = anchor;
  state.current = anchor;
  state.trace.dim = geom.dim;
  append_row(state, geom, op, 0, 0, kNaN);
  return state;
}

void step_nested(const Geometry& geom, const OperatorSpec& op,
                 SchemeState& state, const Schedule& t_sched,
                 const SamplerConfig& sampler, double tol) {
  const int n = state.n;
  const Eigen::VectorXd& xn = state.current;
  const double res_n = norm(geom, xn - op.apply_iterate(n, xn));
  const auto thr = LevelSetThreshold::make(t_sched.t(n), res_n);

  const FeasibleRegion prev =
      state.has_region ? state.cn_region : domain_region(op);
  std::vector<Eigen::VectorXd> hot = prev.hull_vertices;
  hot.push_back(xn);
  hot.push_back(op.apply(xn));
  hot.push_back(op.apply_iterate(n, xn));

  const auto accepted =
      sample_level_set(geom, prev, op, n, thr, sampler, hot);
  FeasibleRegion cn = build_region(geom, accepted, {}, sampler);

  try {
    state.dn_halfspaces.push_back(make_dn_halfspace(geom, xn, state.anchor));
  } catch (const DegenerateHalfSpace&) {
    // x == x_n: D_n stays the whole space (the n = 1 initialization)
  }

  const FeasibleRegion target(cn.hull_vertices, state.dn_halfspaces, cn.box);
  const ProjectionResult proj = project(geom, target, state.anchor, tol);

  state.current = proj.point;
  state.cn_region = std::move(cn);
  state.has_region = true;
  state.n = n + 1;
  append_row(state, geom, op,
             static_cast<int>(state.cn_region.hull_vertices.size()),
             proj.iterations, proj.vi_residual);
}

void step_nakajo_takahashi(const Geometry& geom, const OperatorSpec& op,
                           SchemeState& state, const Schedule& alpha_sched,
                           double tol) {
  if (!geom.euclidean())
    throw GeometryMismatch("step_nakajo_takahashi: requires p = 2");
  if (!op.nonexpansive())
    throw SemanticError("step_nakajo_takahashi: operator must be nonexpansive");
  const int n = state.n;
  const Eigen::VectorXd& xn = state.current;
  const double alpha = alpha_sched.alpha_at(n);
  const Eigen::VectorXd y = alpha * xn + (1.0 - alpha) * op.apply(xn);

  std::vector<HalfSpace> halfspaces;
  // ||z - y|| <= ||z - x_n||  <=>  2<z, x_n - y> <= ||x_n||^2 - ||y||^2
  const Eigen::VectorXd cn_normal = xn - y;
  if (cn_normal.lpNorm<Eigen::Infinity>() > 1e-15)
    halfspaces.emplace_back(cn_normal,
                            0.5 * (xn.squaredNorm() - y.squaredNorm()));
  try {
    // Q_n, with J the identity
    state.dn_halfspaces.push_back(make_dn_halfspace(geom, xn, state.anchor));
  } catch (const DegenerateHalfSpace&) {
  }
  std::vector<HalfSpace> active = halfspaces;
  if (!state.dn_halfspaces.empty())
    active.push_back(state.dn_halfspaces.back());  // the fresh Q_n

  const FeasibleRegion target =
      FeasibleRegion::from_halfspaces(active, op.domain().bounds);
  const ProjectionResult proj = project(geom, target, state.anchor, tol);

  state.current = proj.point;
  state.n = n + 1;
  append_row(state, geom, op, 0, proj.iterations, proj.vi_residual,
             halfspaces);
}

void step_matsushita_takahashi(const Geometry& geom, const OperatorSpec& op,
                               SchemeState& state, const Schedule& t_sched,
                               const SamplerConfig& sampler, double tol) {
  if (!op.nonexpansive())
    throw SemanticError(
        "step_matsushita_takahashi: operator must be nonexpansive");
  const int n = state.n;
  const Eigen::VectorXd& xn = state.current;
  const double res = norm(geom, xn - op.apply(xn));
  const auto thr = LevelSetThreshold::make(t_sched.t(n), res);

  const FeasibleRegion whole = domain_region(op);
  std::vector<Eigen::VectorXd> hot;
  if (state.has_region) hot = state.cn_region.hull_vertices;
  hot.push_back(xn);
  hot.push_back(op.apply(xn));

  const auto accepted = sample_level_set(geom, whole, op, 1, thr, sampler, hot,
                                         static_cast<std::uint64_t>(n));
  FeasibleRegion cn = build_region(geom, accepted, {}, sampler);

  // D_n is fresh each step in this scheme.
  state.dn_halfspaces.clear();
  try {
    state.dn_halfspaces.push_back(make_dn_halfspace(geom, xn, state.anchor));
  } catch (const DegenerateHalfSpace&) {
  }

  const FeasibleRegion target(cn.hull_vertices, state.dn_halfspaces, cn.box);
  const ProjectionResult proj = project(geom, target, state.anchor, tol);

  state.current = proj.point;
  state.cn_region = std::move(cn);
  state.has_region = true;
  state.n = n + 1;
  append_row(state, geom, op,
             static_cast<int>(state.cn_region.hull_vertices.size()),
             proj.iterations, proj.vi_residual);
}

RunTrace run_scheme(const Geometry& geom, const OperatorSpec& op,
                    SchemeKind kind, const Eigen::VectorXd& anchor,
                    const Schedule& t_sched, const Schedule& alpha_sched,
                    const SamplerConfig& sampler, const StoppingRule& stopping,
                    const std::string& config_echo) {
  if (kind == SchemeKind::nt && !geom.euclidean())
    throw GeometryMismatch("run_scheme: scheme nt requires p = 2");
  SchemeState state = init_state(geom, op, anchor, kind);
  state.trace.config_echo = config_echo;
  state.trace.stop_reason = "max_iter";

  for (int it = 0; it < stopping.max_iter; ++it) {
    if (state.trace.rows.back().res_T <= stopping.stop_tol) {
      state.trace.stop_reason = "residual";
      break;
    }
    const std::string at = " (iteration " + std::to_string(state.n) + ")";
    try {
      switch (kind) {
        case SchemeKind::nested:
          step_nested(geom, op, state, t_sched, sampler, stopping.proj_tol);
          break;
        case SchemeKind::mt:
          step_matsushita_takahashi(geom, op, state, t_sched, sampler,
                                    stopping.proj_tol);
          break;
        case SchemeKind::nt:
          step_nakajo_takahashi(geom, op, state, alpha_sched,
                                stopping.proj_tol);
          break;
      }
    } catch (const EmptyLevelSet& e) {
      throw EmptyLevelSet(e.what() + at, e.min_residual, e.bound);
    } catch (const InfeasibleRegion& e) {
      throw InfeasibleRegion(e.what() + at);
    } catch (const NonConvergence& e) {
      throw NonConvergence(e.what() + at, e.best_residual);
    }
  }
  if (state.trace.stop_reason == "max_iter" && stopping.max_iter > 0 &&
      state.trace.rows.back().res_T <= stopping.stop_tol)
    state.trace.stop_reason = "residual";
  return state.trace;
}

}  // namespace hybridproj
