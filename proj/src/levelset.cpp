#include "hybridproj/levelset.hpp"

#include <algorithm>
#include <cmath>

#include "hybridproj/convex.hpp"

namespace hybridproj {

namespace {

struct Archive {
  // lowest-residual points seen so far, best first
  std::vector<std::pair<double, Eigen::VectorXd>> entries;
  static constexpr size_t capacity = 8;

  void offer(double residual, const Eigen::VectorXd& z) {
    auto pos = std::lower_bound(
        entries.begin(), entries.end(), residual,
        [](const auto& e, double r) { return e.first < r; });
    entries.insert(pos, {residual, z});
    if (entries.size() > capacity) entries.pop_back();
  }
  bool empty() const { return entries.empty(); }
};

}  // namespace

std::vector<Eigen::VectorXd> sample_level_set(
    const Geometry& geom, const FeasibleRegion& prev_region,
    const OperatorSpec& op, int n, const LevelSetThreshold& thr,
    const SamplerConfig& cfg, const std::vector<Eigen::VectorXd>& hot_starts,
    std::uint64_t seed_salt) {
  cfg.validate(geom.dim);
  if (thr.bound < 0.0) throw SemanticError("sample_level_set: negative bound");
  if (geom.dim != op.dim() || prev_region.dim() != geom.dim)
    throw DimensionError("sample_level_set: dimension mismatch");

  std::mt19937_64 rng(cfg.seed ^
                      (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(n)) ^
                      (0xc2b2ae3d27d4eb4fULL * (seed_salt + 1)));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const bool hull = prev_region.has_hull();
  const Eigen::MatrixXd V =
      hull ? prev_region.vertex_matrix() : Eigen::MatrixXd();

  auto member = [&](const Eigen::VectorXd& z) {
    if (!op.domain().contains(z, 1e-10)) return false;
    if (prev_region.linear_violation(z) > 1e-10) return false;
    if (hull && project_to_hull(V, z).distance > 1e-9) return false;
    return true;
  };
  // Pull a raw point into prev_region ∩ C.
  auto clip_in = [&](const Eigen::VectorXd& z) -> Eigen::VectorXd {
    Eigen::VectorXd y = hull ? project_to_hull(V, z).point
                             : prev_region.box.clamp(z);
    return op.domain().clip(y);
  };
  auto residual = [&](const Eigen::VectorXd& z) {
    return norm(geom, z - op.apply_iterate(n, z));
  };

  std::vector<Eigen::VectorXd> accepted;
  Archive archive;
  double min_residual = std::numeric_limits<double>::infinity();
  int image_budget = 32;

  auto consider = [&](const Eigen::VectorXd& z, bool allow_image) {
    const double r = residual(z);
    min_residual = std::min(min_residual, r);
    archive.offer(r, z);
    if (r <= thr.bound) {
      accepted.push_back(z);
      if (allow_image && image_budget > 0) {
        --image_budget;
        // T^n pushes points toward F(T); keep the image if it stays inside.
        const Eigen::VectorXd img = op.apply_iterate(n, z);
        if (member(img)) {
          const double ri = residual(img);
          min_residual = std::min(min_residual, ri);
          archive.offer(ri, img);
          if (ri <= thr.bound) accepted.push_back(img);
        }
      }
    }
  };

  for (const auto& h : hot_starts)
    if (h.size() == geom.dim && member(h)) consider(h, true);

  const double spread =
      0.5 * (hull ? (V.rowwise().maxCoeff() - V.rowwise().minCoeff()).norm()
                  : prev_region.box.diameter());

  for (int attempt = 0; attempt < 2; ++attempt) {
    const int budget = cfg.samples_per_round << attempt;
    const int importance =
        archive.empty() ? 0
                        : static_cast<int>(cfg.importance_fraction * budget);

    // Uniform pass over prev_region.
    for (int s = 0; s < budget - importance; ++s) {
      Eigen::VectorXd z(geom.dim);
      if (hull) {
        std::exponential_distribution<double> expo(1.0);
        Eigen::VectorXd w(V.cols());
        for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = expo(rng);
        w /= w.sum();
        z = V * w;
        // z lies in the hull by construction; only the side constraints
        // need checking.
        if (!op.domain().contains(z, 1e-10)) continue;
        if (prev_region.linear_violation(z) > 1e-10) continue;
      } else {
        bool ok = false;
        for (int tries = 0; tries < 8 && !ok; ++tries) {
          for (int i = 0; i < geom.dim; ++i)
            z[i] = prev_region.box.lower[i] +
                   unif(rng) * (prev_region.box.upper[i] -
                                prev_region.box.lower[i]);
          ok = member(z);
        }
        if (!ok) continue;
      }
      consider(z, true);
    }

    // Importance pass: antithetic gaussian pairs around the archive, with
    // radii sweeping several scales so the hull keeps surrounding the
    // near-fixed cluster.
    for (int s = 0; s < importance; s += 2) {
      if (archive.empty()) break;
      const auto& center =
          archive.entries[static_cast<size_t>(s / 2) % archive.entries.size()]
              .second;
      const double radius =
          spread * std::pow(10.0, -4.0 * unif(rng));  // log-uniform
      Eigen::VectorXd delta(geom.dim);
      for (int i = 0; i < geom.dim; ++i) delta[i] = gauss(rng);
      delta *= radius / std::max(delta.norm(), 1e-300);
      for (const double sign : {1.0, -1.0}) {
        Eigen::VectorXd z = clip_in(center + sign * delta);
        if (member(z)) consider(z, false);
      }
    }

    if (!accepted.empty()) break;  // retry once with a doubled budget
  }

  if (accepted.empty())
    throw EmptyLevelSet(
        "sample_level_set: no sample met the level condition (best residual " +
            std::to_string(min_residual) + " vs bound " +
            std::to_string(thr.bound) + ")",
        min_residual, thr.bound);
  return accepted;
}

namespace {

std::vector<Eigen::VectorXd> dedup(const std::vector<Eigen::VectorXd>& pts,
                                   double eps) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& p : pts) {
    bool seen = false;
    for (const auto& q : out)
      if ((p - q).lpNorm<Eigen::Infinity>() <= eps) {
        seen = true;
        break;
      }
    if (!seen) out.push_back(p);
  }
  return out;
}

double cross2(const Eigen::VectorXd& o, const Eigen::VectorXd& a,
              const Eigen::VectorXd& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew monotone chain, collinear points dropped.
std::vector<Eigen::VectorXd> hull_2d(std::vector<Eigen::VectorXd> pts,
                                     double eps) {
  std::sort(pts.begin(), pts.end(),
            [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
              return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
            });
  const size_t n = pts.size();
  if (n <= 2) return pts;
  std::vector<Eigen::VectorXd> h(2 * n);
  size_t k = 0;
  for (size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross2(h[k - 2], h[k - 1], pts[i]) <= eps) --k;
    h[k++] = pts[i];
  }
  const size_t lower = k + 1;
  for (size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross2(h[k - 2], h[k - 1], pts[i]) <= eps) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

Eigen::MatrixXd stack(const std::vector<Eigen::VectorXd>& pts,
                      int skip = -1) {
  const int m = static_cast<int>(pts.size()) - (skip >= 0 ? 1 : 0);
  Eigen::MatrixXd V(pts.front().size(), m);
  int c = 0;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    if (i == skip) continue;
    V.col(c++) = pts[static_cast<size_t>(i)];
  }
  return V;
}

// Exact extreme points for d = 3: incremental insertion of points not yet
// inside the running hull, then a cleanup pass removing anything interior
// to the rest.
std::vector<Eigen::VectorXd> extreme_points_3d(
    std::vector<Eigen::VectorXd> pts, double eps) {
  Eigen::VectorXd centroid = Eigen::VectorXd::Zero(pts.front().size());
  for (const auto& p : pts) centroid += p;
  centroid /= static_cast<double>(pts.size());
  std::sort(pts.begin(), pts.end(),
            [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
              return (a - centroid).squaredNorm() > (b - centroid).squaredNorm();
            });

  std::vector<Eigen::VectorXd> h;
  for (const auto& p : pts) {
    if (h.size() < 2 || project_to_hull(stack(h), p).distance > eps)
      h.push_back(p);
  }
  bool changed = true;
  while (changed && h.size() > 2) {
    changed = false;
    for (int i = static_cast<int>(h.size()); i-- > 0;) {
      if (h.size() <= 2) break;
      if (project_to_hull(stack(h, i), h[static_cast<size_t>(i)]).distance <=
          eps) {
        h.erase(h.begin() + i);
        changed = true;
      }
    }
  }
  return h;
}

std::vector<Eigen::VectorXd> farthest_point_filter(
    const std::vector<Eigen::VectorXd>& pts, int cap) {
  if (static_cast<int>(pts.size()) <= cap) return pts;
  Eigen::VectorXd centroid = Eigen::VectorXd::Zero(pts.front().size());
  for (const auto& p : pts) centroid += p;
  centroid /= static_cast<double>(pts.size());
  std::vector<bool> used(pts.size(), false);
  std::vector<Eigen::VectorXd> out;
  size_t first = 0;
  double best = -1.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    const double d = (pts[i] - centroid).squaredNorm();
    if (d > best) {
      best = d;
      first = i;
    }
  }
  used[first] = true;
  out.push_back(pts[first]);
  while (static_cast<int>(out.size()) < cap) {
    double far_d = -1.0;
    size_t far_i = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
      if (used[i]) continue;
      double dmin = std::numeric_limits<double>::infinity();
      for (const auto& q : out)
        dmin = std::min(dmin, (pts[i] - q).squaredNorm());
      if (dmin > far_d) {
        far_d = dmin;
        far_i = i;
      }
    }
    used[far_i] = true;
    out.push_back(pts[far_i]);
  }
  return out;
}

}  // namespace

FeasibleRegion build_region(const Geometry& geom,
                            const std::vector<Eigen::VectorXd>& accepted,
                            const std::vector<HalfSpace>& halfspaces,
                            const SamplerConfig& cfg) {
  if (accepted.empty())
    throw SemanticError("build_region: accepted set must be nonempty");
  double scale = 0.0;
  for (const auto& p : accepted) {
    check_dim(geom, p, "build_region");
    scale = std::max(scale, p.lpNorm<Eigen::Infinity>());
  }
  const double eps = 1e-12 * (1.0 + scale);

  std::vector<Eigen::VectorXd> pts = dedup(accepted, eps);
  std::vector<Eigen::VectorXd> hull;
  if (pts.size() <= 2) {
    hull = pts;
  } else if (geom.dim == 1) {
    auto [lo, hi] = std::minmax_element(
        pts.begin(), pts.end(),
        [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
          return a[0] < b[0];
        });
    hull = {*lo, *hi};
  } else if (geom.dim == 2) {
    hull = hull_2d(pts, eps * (1.0 + scale));
  } else if (geom.dim == 3) {
    hull = extreme_points_3d(pts, 1e-10 * (1.0 + scale));
  } else {
    hull = farthest_point_filter(pts, cfg.hull_cap(geom.dim));
  }
  if (static_cast<int>(hull.size()) > cfg.hull_cap(geom.dim))
    hull = farthest_point_filter(hull, cfg.hull_cap(geom.dim));

  Eigen::VectorXd lo = hull.front(), hi = hull.front();
  for (const auto& v : hull) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const Eigen::VectorXd pad = Eigen::VectorXd::Constant(geom.dim, eps);
  return FeasibleRegion(hull, halfspaces, Box(lo - pad, hi + pad));
}

}  // namespace hybridproj
