#include "hybridproj/projection.hpp"

#include <cmath>
#include <random>

namespace hybridproj {

namespace {

// d f / d z_i for f(z) = sum |z_i - a_i|^p
Eigen::VectorXd lp_power_gradient(const Eigen::VectorXd& z,
                                  const Eigen::VectorXd& a, double p) {
  Eigen::VectorXd g(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double r = z[i] - a[i];
    const double m = std::abs(r);
    g[i] = m == 0.0 ? 0.0 : (r < 0.0 ? -p : p) * std::pow(m, p - 1.0);
  }
  return g;
}

double lp_power_value(const Eigen::VectorXd& z, const Eigen::VectorXd& a,
                      double p) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i)
    acc += std::pow(std::abs(z[i] - a[i]), p);
  return acc;
}

struct PGResult {
  Eigen::VectorXd var;
  int iterations = 0;
  double last_move = 0.0;
};

// Monotone projected gradient with backtracking sufficient-decrease line
// search.  `feas` must be the (near-)exact Euclidean projection onto the
// feasible set of the variable.
PGResult projected_gradient(
    const Eigen::VectorXd& start, const Projector& feas,
    const std::function<double(const Eigen::VectorXd&)>& value,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& gradient,
    double move_tol, int max_iter) {
  PGResult out;
  Eigen::VectorXd var = feas(start);
  double fv = value(var);
  double step = 1.0;
  int it = 0;
  for (; it < max_iter; ++it) {
    const Eigen::VectorXd g = gradient(var);
    Eigen::VectorXd trial;
    double ft = fv;
    bool accepted = false;
    for (int bt = 0; bt < 80; ++bt) {
      trial = feas(var - step * g);
      const Eigen::VectorXd d = trial - var;
      ft = value(trial);
      if (ft <= fv + g.dot(d) + 0.5 / step * d.squaredNorm() + 1e-18) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    out.last_move = (trial - var).lpNorm<Eigen::Infinity>();
    var = trial;
    fv = ft;
    step = std::min(step * 1.6, 1e8);
    if (out.last_move <= move_tol) {
      ++it;
      break;
    }
  }
  out.var = var;
  out.iterations = it;
  return out;
}

// Half-space systems in variable space; for the hull parameterization the
// normals are pre-multiplied by V^T and the box rows are expanded.
struct LinearSystem {
  std::vector<HalfSpace> rows;

  double max_violation(const Eigen::VectorXd& v) const {
    double worst = 0.0;
    for (const auto& h : rows) worst = std::max(worst, h.violation(v));
    return worst;
  }
  double hinge_sq(const Eigen::VectorXd& v) const {
    double acc = 0.0;
    for (const auto& h : rows) {
      const double s = std::max(0.0, h.violation(v));
      acc += s * s;
    }
    return acc;
  }
  Eigen::VectorXd hinge_sq_grad(const Eigen::VectorXd& v) const {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(v.size());
    for (const auto& h : rows) {
      const double s = h.violation(v);
      if (s > 0.0) g += 2.0 * s * h.normal;
    }
    return g;
  }
};

// Phase 1: drive the linear constraints feasible over the base set
// (simplex or box).  Returns the best point found.
Eigen::VectorXd phase_one(const Eigen::VectorXd& start, const Projector& base,
                          const LinearSystem& sys) {
  auto value = [&](const Eigen::VectorXd& v) { return sys.hinge_sq(v); };
  auto grad = [&](const Eigen::VectorXd& v) { return sys.hinge_sq_grad(v); };
  return projected_gradient(start, base, value, grad, 1e-12, 20000).var;
}

// Minimize `value` over base ∩ sys by quadratic-penalty continuation; the
// inner projections stay exact (simplex / box clamp), which keeps the line
// search well behaved.  A final Dykstra pass restores strict feasibility.
PGResult penalty_solve(
    const Eigen::VectorXd& start, const Projector& base,
    const LinearSystem& sys,
    const std::function<double(const Eigen::VectorXd&)>& value,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& gradient,
    double move_tol, int max_iter, double polish_tol) {
  if (sys.rows.empty())
    return projected_gradient(start, base, value, gradient, move_tol,
                              max_iter);

  PGResult pg;
  Eigen::VectorXd var = start;
  const double mus[] = {1e2, 1e4, 1e6, 1e8, 1e10, 1e12};
  const int stage_iter = std::max(200, max_iter / 6);
  for (const double mu : mus) {
    auto pen_value = [&](const Eigen::VectorXd& v) {
      return value(v) + mu * sys.hinge_sq(v);
    };
    auto pen_grad = [&](const Eigen::VectorXd& v) {
      return Eigen::VectorXd(gradient(v) + mu * sys.hinge_sq_grad(v));
    };
    pg = projected_gradient(var, base, pen_value, pen_grad, move_tol,
                           stage_iter);
    var = pg.var;
  }

  std::vector<Projector> sets;
  sets.push_back(base);
  for (const auto& h : sys.rows)
    sets.push_back([h](const Eigen::VectorXd& v) {
      return project_to_halfspace(h, v);
    });
  pg.var = dykstra(var, sets, polish_tol, 10000);
  return pg;
}

}  // namespace

ProjectionResult project(const Geometry& geom, const FeasibleRegion& region,
                         const Eigen::VectorXd& anchor, double tol,
                         int max_iter) {
  check_dim(geom, anchor, "project");
  if (!(tol > 0.0)) throw SemanticError("project: tol must be positive");
  const double p = geom.p;
  ProjectionResult result;

  const double inner_tol = std::min(1e-11, 0.01 * tol);

  if (region.has_hull()) {
    const Eigen::MatrixXd V = region.vertex_matrix();
    const Eigen::Index m = V.cols();

    LinearSystem sys;
    for (const auto& h : region.halfspaces)
      sys.rows.emplace_back(V.transpose() * h.normal, h.offset);
    for (int i = 0; i < region.dim(); ++i) {
      // box rows expressed in weight space; skip the effectively
      // unconstrained ambient bounds
      if (region.box.upper[i] < 1e8)
        sys.rows.emplace_back(V.row(i).transpose(), region.box.upper[i]);
      if (region.box.lower[i] > -1e8)
        sys.rows.emplace_back(-V.row(i).transpose(), -region.box.lower[i]);
    }

    Projector simplex = [](const Eigen::VectorXd& w) {
      return project_to_simplex(w);
    };

    Eigen::VectorXd w0 =
        project_to_simplex(Eigen::VectorXd::Constant(m, 1.0 / double(m)));
    if (!sys.rows.empty() && sys.max_violation(w0) > 1e-6) {
      w0 = phase_one(w0, simplex, sys);
      if (sys.max_violation(w0) > 1e-6)
        throw InfeasibleRegion(
            "project: hull ∩ half-spaces appears empty (phase-1 stalled at "
            "violation " +
            std::to_string(sys.max_violation(w0)) + ")");
    }

    auto value = [&](const Eigen::VectorXd& w) {
      return lp_power_value(V * w, anchor, p);
    };
    auto grad = [&](const Eigen::VectorXd& w) {
      return Eigen::VectorXd(V.transpose() *
                             lp_power_gradient(V * w, anchor, p));
    };
    PGResult pg = penalty_solve(w0, simplex, sys, value, grad, 0.05 * tol,
                                max_iter, inner_tol);
    if (pg.iterations >= max_iter && pg.last_move > 1e3 * tol)
      throw NonConvergence(
          "project: weight iteration exhausted its budget", pg.last_move);

    Eigen::VectorXd w = pg.var.cwiseMax(0.0);
    const double total = w.sum();
    if (total > 0.0) w /= total;
    result.weights = w;
    result.point = V * w;
    result.iterations = pg.iterations;
  } else {
    LinearSystem sys;
    sys.rows = region.halfspaces;
    Projector boxproj = [&region](const Eigen::VectorXd& z) {
      return region.box.clamp(z);
    };

    Eigen::VectorXd z0 = region.box.clamp(anchor);
    if (!sys.rows.empty() && sys.max_violation(z0) > 1e-6) {
      z0 = phase_one(z0, boxproj, sys);
      if (sys.max_violation(z0) > 1e-6)
        throw InfeasibleRegion(
            "project: box ∩ half-spaces appears empty (phase-1 stalled at "
            "violation " +
            std::to_string(sys.max_violation(z0)) + ")");
    }

    auto value = [&](const Eigen::VectorXd& z) {
      return lp_power_value(z, anchor, p);
    };
    auto grad = [&](const Eigen::VectorXd& z) {
      return lp_power_gradient(z, anchor, p);
    };
    PGResult pg = penalty_solve(z0, boxproj, sys, value, grad, 0.05 * tol,
                                max_iter, inner_tol);
    if (pg.iterations >= max_iter && pg.last_move > 1e3 * tol)
      throw NonConvergence("project: iteration exhausted its budget",
                           pg.last_move);
    result.point = pg.var;
    result.iterations = pg.iterations;
  }

  result.vi_residual =
      vi_certificate(geom, region, result.point, anchor, 64, 0x5eedULL);
  return result;
}

Eigen::VectorXd euclidean_oracle(const FeasibleRegion& region,
                                 const Eigen::VectorXd& anchor) {
  if (region.halfspaces.size() > 32)
    throw SemanticError("euclidean_oracle: more than 32 half-spaces");
  if (region.hull_vertices.size() > 64)
    throw SemanticError("euclidean_oracle: more than 64 hull vertices");

  std::vector<Projector> sets;
  if (region.has_hull()) {
    const Eigen::MatrixXd V = region.vertex_matrix();
    sets.push_back([V](const Eigen::VectorXd& z) {
      return project_to_hull(V, z).point;
    });
  }
  for (const auto& h : region.halfspaces)
    sets.push_back(
        [h](const Eigen::VectorXd& z) { return project_to_halfspace(h, z); });
  sets.push_back(
      [&region](const Eigen::VectorXd& z) { return region.box.clamp(z); });

  Eigen::VectorXd x = dykstra(anchor, sets, 1e-13, 50000);
  if (region_violation(region, x) > 1e-6)
    throw InfeasibleRegion("euclidean_oracle: region appears empty");
  return x;
}

namespace {

// Largest lambda in [0,1] keeping base + lambda (target - base) inside the
// linear constraints; the hull part is convex so the segment stays inside
// whenever both endpoints do.
double feasible_segment(const FeasibleRegion& region,
                        const Eigen::VectorXd& base,
                        const Eigen::VectorXd& target) {
  double lam = 1.0;
  const Eigen::VectorXd dir = target - base;
  for (const auto& h : region.halfspaces) {
    const double denom = h.normal.dot(dir);
    if (denom > 0.0) {
      const double room = std::max(0.0, h.offset - h.normal.dot(base));
      lam = std::min(lam, room / denom);
    }
  }
  for (int i = 0; i < region.dim(); ++i) {
    if (dir[i] > 0.0) {
      const double room = std::max(0.0, region.box.upper[i] - base[i]);
      lam = std::min(lam, room / dir[i]);
    } else if (dir[i] < 0.0) {
      const double room = std::max(0.0, base[i] - region.box.lower[i]);
      lam = std::min(lam, room / -dir[i]);
    }
  }
  return lam;
}

}  // namespace

double vi_certificate(const Geometry& geom, const FeasibleRegion& region,
                      const Eigen::VectorXd& candidate,
                      const Eigen::VectorXd& anchor, int samples,
                      std::uint64_t seed) {
  check_dim(geom, candidate, "vi_certificate");
  check_dim(geom, anchor, "vi_certificate");
  const Eigen::VectorXd j = duality_map(geom, anchor - candidate);
  if (j.lpNorm<Eigen::Infinity>() == 0.0) return 0.0;  // anchor == candidate

  double cert = std::numeric_limits<double>::infinity();
  auto test = [&](const Eigen::VectorXd& target) {
    const double lam = feasible_segment(region, candidate, target);
    const Eigen::VectorXd y = candidate + lam * (target - candidate);
    cert = std::min(cert, (candidate - y).dot(j));
  };

  for (const auto& v : region.hull_vertices) test(v);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  const int d = region.dim();
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd target(d);
    if (region.has_hull()) {
      Eigen::VectorXd w(static_cast<Eigen::Index>(region.hull_vertices.size()));
      for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = expo(rng);
      w /= w.sum();
      target = region.vertex_matrix() * w;
    } else {
      for (int i = 0; i < d; ++i) {
        const double lo = std::max(region.box.lower[i], candidate[i] - 1e3);
        const double hi = std::min(region.box.upper[i], candidate[i] + 1e3);
        target[i] = lo + unif(rng) * (hi - lo);
      }
    }
    test(target);
  }
  return std::isfinite(cert) ? cert : 0.0;
}

}  // namespace hybridproj
