// Acceptance suite: one line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hybridproj/harness.hpp"

using namespace hybridproj;
using Eigen::VectorXd;

namespace {

int g_failures = 0;

void criterion(int id, const std::string& what, double budget_s,
               const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  const auto start = std::chrono::steady_clock::now();
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (elapsed > budget_s) {
    ok = false;
    detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
  }
  std::printf("[%s] criterion %d: %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", id,
              what.c_str(), elapsed, detail.empty() ? "" : " -- ",
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

VectorXd vec(std::initializer_list<double> xs) {
  VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

FeasibleRegion random_region(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<int> nverts(d + 2, d + 6);
  std::uniform_int_distribution<int> nhs(0, 3);
  std::vector<VectorXd> verts;
  VectorXd centroid = VectorXd::Zero(d);
  const int m = nverts(rng);
  for (int i = 0; i < m; ++i) {
    VectorXd v(d);
    for (int k = 0; k < d; ++k) v[k] = unif(rng);
    centroid += v;
    verts.push_back(v);
  }
  centroid /= m;
  std::vector<HalfSpace> hs;
  const int h = nhs(rng);
  for (int i = 0; i < h; ++i) {
    VectorXd n(d);
    for (int k = 0; k < d; ++k) n[k] = unif(rng);
    if (n.norm() < 1e-3) n[0] += 1.0;
    hs.emplace_back(n, n.dot(centroid) + 0.2 * n.norm());
  }
  return FeasibleRegion(verts, hs, Box::cube(d, 2.0));
}

struct TraceBundle {
  std::vector<RunTrace> traces;
  std::vector<std::vector<VectorXd>> fixed;
  std::vector<double> anchor_norms;  // ||x - u|| minimized over known u
};

TraceBundle g_bundle;  // populated by criteria 3-5, reused by 6-7

void remember(const Geometry& geom, const RunTrace& trace,
              const OperatorSpec& op, const VectorXd& anchor) {
  g_bundle.traces.push_back(trace);
  g_bundle.fixed.push_back(op.known_fixed_points());
  double best = std::numeric_limits<double>::infinity();
  for (const auto& u : op.known_fixed_points())
    best = std::min(best, norm(geom, anchor - u));
  g_bundle.anchor_norms.push_back(best);
}

}  // namespace

int main() {
  criterion(1, "duality map identities, 1e4 vectors per (p, d)", 1.0,
            [](std::string& detail) {
              std::mt19937_64 rng(41);
              std::normal_distribution<double> gauss(0.0, 2.0);
              double worst = 0.0;
              for (double p : {1.5, 2.0, 3.0, 4.0})
                for (int d : {1, 2, 3, 8}) {
                  const Geometry geom(d, p);
                  for (int rep = 0; rep < 10000; ++rep) {
                    VectorXd x(d);
                    for (int i = 0; i < d; ++i) x[i] = gauss(rng);
                    const VectorXd j = duality_map(geom, x);
                    const double nx = norm(geom, x);
                    worst = std::max(
                        worst, std::abs(pairing(x, j) - nx * nx) /
                                   (1.0 + nx * nx));
                    worst = std::max(worst, std::abs(dual_norm(geom, j) - nx) /
                                                (1.0 + nx));
                  }
                }
              detail = "max relative error " + std::to_string(worst);
              return worst <= 1e-9;
            });

  criterion(2, "metric projection on 100 random regions", 30.0,
            [](std::string& detail) {
              std::mt19937_64 rng(42);
              std::uniform_real_distribution<double> unif(-2.0, 2.0);
              double worst_vi = 0.0, worst_idem = 0.0, worst_oracle = 0.0;
              for (int rep = 0; rep < 100; ++rep) {
                const int d = 2 + rep % 3;
                const FeasibleRegion region = random_region(rng, d);
                VectorXd anchor(d);
                for (int i = 0; i < d; ++i) anchor[i] = unif(rng);
                for (double p : {2.0, 3.0}) {
                  const Geometry geom(d, p);
                  const auto r = project(geom, region, anchor);
                  worst_vi = std::min(worst_vi, r.vi_residual);
                  const auto r2 = project(geom, region, r.point);
                  worst_idem = std::max(
                      worst_idem,
                      (r2.point - r.point).lpNorm<Eigen::Infinity>());
                  if (p == 2.0)
                    worst_oracle = std::max(
                        worst_oracle,
                        (r.point - euclidean_oracle(region, anchor)).norm());
                }
              }
              detail = "vi " + std::to_string(worst_vi) + ", idem " +
                       std::to_string(worst_idem) + ", oracle " +
                       std::to_string(worst_oracle);
              return worst_vi >= -1e-7 && worst_idem <= 1e-8 &&
                     worst_oracle <= 1e-6;
            });

  criterion(3, "Hilbert-space scheme on the 1-radian rotation", 5.0,
            [](std::string& detail) {
              const Geometry geom(2, 2.0);
              const auto op = OperatorSpec::rotation(1.0);
              const VectorXd anchor = vec({1, 1});
              StoppingRule stopping;
              stopping.max_iter = 200;
              stopping.stop_tol = 1e-4;
              SamplerConfig sampler;
              const auto trace = run_scheme(
                  geom, op, SchemeKind::nt, anchor, Schedule::harmonic(),
                  Schedule::constant_alpha(0.5), sampler, stopping);
              remember(geom, trace, op, anchor);
              const double final_norm = trace.rows.back().x.norm();
              detail = "||x_n|| = " + std::to_string(final_norm) + " after " +
                       std::to_string(trace.rows.size() - 1) + " steps";
              if (final_norm > 1e-3) return false;
              for (size_t i = 1; i < trace.rows.size(); ++i)
                if (trace.rows[i].anchor_dist <
                    trace.rows[i - 1].anchor_dist - 1e-9)
                  return false;
              for (const auto& row : trace.rows)
                if (row.anchor_dist > anchor.norm() + 1e-8) return false;
              return true;
            });

  criterion(4, "nested scheme on the halving map, p in {2, 3}", 60.0,
            [](std::string& detail) {
              bool ok = true;
              for (double p : {2.0, 3.0}) {
                const Geometry geom(2, p);
                const auto op = OperatorSpec::contraction(2, 0.5);
                const VectorXd anchor = vec({0.8, 0.6});
                StoppingRule stopping;
                stopping.max_iter = 50;
                stopping.stop_tol = 1e-9;
                SamplerConfig sampler;
                sampler.seed = 7;
                sampler.samples_per_round = 2000;
                const auto trace = run_scheme(
                    geom, op, SchemeKind::nested, anchor, Schedule::harmonic(),
                    Schedule::constant_alpha(0.5), sampler, stopping);
                remember(geom, trace, op, anchor);
                const double dist = norm(geom, trace.rows.back().x);
                detail += "p=" + std::to_string(p) + " dist " +
                          std::to_string(dist) + "  ";
                ok = ok && dist <= 1e-2;
              }
              return ok;
            });

  criterion(5, "nested scheme on the truncated quadratic map", 60.0,
            [](std::string& detail) {
              const Geometry geom(3, 2.0);
              const auto op = OperatorSpec::gk_truncated(3);
              const VectorXd anchor = vec({0.9, 0.1, 0.1});
              StoppingRule stopping;
              stopping.max_iter = 30;
              stopping.stop_tol = 1e-9;
              SamplerConfig sampler;
              sampler.seed = 9;
              sampler.samples_per_round = 2000;
              const auto trace = run_scheme(
                  geom, op, SchemeKind::nested, anchor, Schedule::harmonic(),
                  Schedule::constant_alpha(0.5), sampler, stopping);
              remember(geom, trace, op, anchor);
              const auto& last = trace.rows.back();
              const double dist = last.x.norm();
              detail = "dist " + std::to_string(dist) + ", power residual " +
                       std::to_string(last.res_Tn);
              return dist <= 1e-2 && last.res_Tn <= 1e-2;
            });

  criterion(6, "fixed points satisfy every accumulated half-space", 5.0,
            [](std::string& detail) {
              double worst = 0.0;
              int checked = 0;
              for (size_t t = 0; t < g_bundle.traces.size(); ++t) {
                if (g_bundle.fixed[t].empty()) continue;
                for (const auto& row : g_bundle.traces[t].rows) {
                  if (std::isnan(row.dn_violation)) continue;
                  worst = std::max(worst, row.dn_violation);
                  ++checked;
                }
              }
              detail = "worst violation " + std::to_string(worst) + " over " +
                       std::to_string(checked) + " rows";
              return checked > 0 && worst <= 1e-8;
            });

  criterion(7, "anchor distances are monotone and bounded", 5.0,
            [](std::string& detail) {
              double worst_drop = 0.0, worst_excess = -1e30;
              for (size_t t = 0; t < g_bundle.traces.size(); ++t) {
                const auto& rows = g_bundle.traces[t].rows;
                for (size_t i = 1; i < rows.size(); ++i)
                  worst_drop = std::max(worst_drop, rows[i - 1].anchor_dist -
                                                        rows[i].anchor_dist);
                if (std::isfinite(g_bundle.anchor_norms[t]))
                  for (const auto& row : rows)
                    worst_excess =
                        std::max(worst_excess,
                                 row.anchor_dist - g_bundle.anchor_norms[t]);
              }
              detail = "worst drop " + std::to_string(worst_drop) +
                       ", worst excess " + std::to_string(worst_excess);
              return worst_drop <= 1e-9 && worst_excess <= 1e-7;
            });

  criterion(8, "non-nested and nested schemes agree on the halving map", 60.0,
            [](std::string& detail) {
              const Geometry geom(2, 2.0);
              const auto op = OperatorSpec::contraction(2, 0.5);
              const VectorXd anchor = vec({0.8, 0.6});
              StoppingRule stopping;
              stopping.max_iter = 40;
              stopping.stop_tol = 1e-5;
              SamplerConfig sampler;
              sampler.seed = 15;
              sampler.samples_per_round = 1500;
              const auto nested = run_scheme(
                  geom, op, SchemeKind::nested, anchor, Schedule::harmonic(),
                  Schedule::constant_alpha(0.5), sampler, stopping);
              const auto mt = run_scheme(
                  geom, op, SchemeKind::mt, anchor, Schedule::harmonic(),
                  Schedule::constant_alpha(0.5), sampler, stopping);
              const double gap =
                  (nested.rows.back().x - mt.rows.back().x).norm();
              detail = "final iterate gap " + std::to_string(gap);
              return gap <= 2e-2;
            });

  criterion(9, "empirical Lipschitz constants respect declared k_n", 60.0,
            [](std::string& detail) {
              const std::vector<std::pair<OperatorSpec, Geometry>> cases = {
                  {OperatorSpec::contraction(2, 0.5), Geometry(2, 2.0)},
                  {OperatorSpec::contraction(2, 1.0), Geometry(2, 2.0)},
                  {OperatorSpec::rotation(1.0), Geometry(2, 2.0)},
                  {OperatorSpec::gk_truncated(3), Geometry(3, 2.0)},
                  {OperatorSpec::gk_truncated(4), Geometry(4, 2.0)},
                  {OperatorSpec::box_projection(Box::cube(2, 1.0),
                                                Box::cube(2, 0.5)),
                   Geometry(2, 2.0)},
                  {OperatorSpec::composite(1.0, 0.8), Geometry(2, 2.0)}};
              double worst = -1e30;
              for (const auto& [op, geom] : cases)
                for (int n = 1; n <= 10; ++n)
                  worst = std::max(
                      worst, empirical_lipschitz(geom, op, n, 1000, 61) -
                                 op.kn(n));
              detail = "worst excess over declared k_n: " +
                       std::to_string(worst);
              return worst <= 1e-6;
            });

  std::printf("%d criterion failure(s)\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
