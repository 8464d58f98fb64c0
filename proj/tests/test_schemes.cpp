#include <doctest.h>

#include <cmath>

#include "hybridproj/schemes.hpp"

using namespace hybridproj;
using Eigen::VectorXd;

namespace {

VectorXd vec2(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("schedules") {
  const auto h = Schedule::harmonic(1.0, 1.0);
  CHECK(h.t(1) == 0.5);
  CHECK(h.t(3) == 0.25);
  const auto g = Schedule::geometric(0.9, 0.5);
  CHECK(g.t(1) == doctest::Approx(0.45));
  CHECK(g.t(2) == doctest::Approx(0.225));
  CHECK_THROWS_AS(Schedule::harmonic(2.0, 1.0), SemanticError);
  CHECK_THROWS_AS(Schedule::geometric(2.0, 0.5), SemanticError);
  CHECK_THROWS_AS(Schedule::constant_alpha(1.0), SemanticError);
  CHECK(Schedule::constant_alpha(0.25).alpha_at(7) == 0.25);
}

TEST_CASE("D half-space worked examples") {
  const Geometry g2(2, 2.0);
  // anchor (1,0), xn (0,0): J(anchor - xn) = (1,0), boundary through xn
  const auto hs = make_dn_halfspace(g2, vec2(0, 0), vec2(1, 0));
  CHECK(hs.violation(vec2(0, 0)) == 0.0);
  CHECK(hs.contains(vec2(-1, 0.3)));
  CHECK(!hs.contains(vec2(0.1, 0)));

  // p = 3, anchor (1,1), xn 0: J is symmetric, so the cut is z1 + z2 <= 0
  const Geometry g3(2, 3.0);
  const auto hs3 = make_dn_halfspace(g3, vec2(0, 0), vec2(1, 1));
  CHECK(hs3.normal[0] == doctest::Approx(hs3.normal[1]).epsilon(1e-14));
  CHECK(std::abs(hs3.offset) <= 1e-14);
  CHECK(hs3.contains(vec2(0.4, -0.4)));
  CHECK(!hs3.contains(vec2(0.4, 0.4)));

  CHECK_THROWS_AS(make_dn_halfspace(g2, vec2(1, 0), vec2(1, 0)),
                  DegenerateHalfSpace);
}

TEST_CASE("1-D first nested step is exact") {
  // halving map on [-1,1], anchor 1, t_1 = 1/2: the level set is
  // [-1/2, 1/2] and T(x_1) = 1/2 is a hot start, so x_2 = 1/2.
  const Geometry geom(1, 2.0);
  const auto op = OperatorSpec::contraction(1, 0.5);
  VectorXd anchor(1);
  anchor << 1.0;
  auto state = init_state(geom, op, anchor, SchemeKind::nested);
  SamplerConfig sampler;
  sampler.seed = 11;
  step_nested(geom, op, state, Schedule::harmonic(), sampler, 1e-9);
  CHECK(state.current[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(state.trace.rows.size() == 2);
  CHECK(state.trace.rows[1].anchor_dist == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("first Hilbert-space step on the quarter rotation") {
  // alpha = 0: y = T x0 = (0,1) for x0 = (1,0).  C_0 is the bisector
  // z2 >= z1, Q_0 is the whole space, so x_1 = P(x0) = (1/2, 1/2).
  const Geometry geom(2, 2.0);
  const auto op = OperatorSpec::rotation(M_PI / 2);
  auto state = init_state(geom, op, vec2(1, 0), SchemeKind::nt);
  step_nakajo_takahashi(geom, op, state, Schedule::constant_alpha(0.0), 1e-10);
  CHECK((state.current - vec2(0.5, 0.5)).lpNorm<Eigen::Infinity>() <= 1e-7);
}

TEST_CASE("Hilbert-space scheme requires p = 2") {
  const Geometry geom(2, 3.0);
  const auto op = OperatorSpec::rotation(1.0);
  SamplerConfig sampler;
  CHECK_THROWS_AS(run_scheme(geom, op, SchemeKind::nt, vec2(1, 0),
                             Schedule::harmonic(), Schedule::constant_alpha(0.5),
                             sampler, StoppingRule{}),
                  GeometryMismatch);
}

TEST_CASE("identity operator stops immediately") {
  const Geometry geom(2, 2.0);
  const auto op = OperatorSpec::contraction(2, 1.0);
  SamplerConfig sampler;
  const auto trace =
      run_scheme(geom, op, SchemeKind::nested, vec2(0.3, 0.4),
                 Schedule::harmonic(), Schedule::constant_alpha(0.5), sampler,
                 StoppingRule{});
  CHECK(trace.stop_reason == "residual");
  CHECK(trace.rows.size() == 1);
  CHECK(trace.rows[0].res_T == 0.0);
}

TEST_CASE("anchor at a fixed point is stationary") {
  const Geometry geom(2, 2.0);
  const auto op = OperatorSpec::contraction(2, 0.5);
  SamplerConfig sampler;
  const auto trace =
      run_scheme(geom, op, SchemeKind::nested, vec2(0, 0),
                 Schedule::harmonic(), Schedule::constant_alpha(0.5), sampler,
                 StoppingRule{});
  CHECK(trace.stop_reason == "residual");
  CHECK(trace.rows.back().x.norm() == 0.0);
}

TEST_CASE("max_iter = 0 yields only the initial row") {
  const Geometry geom(2, 2.0);
  const auto op = OperatorSpec::rotation(1.0);
  SamplerConfig sampler;
  StoppingRule stopping;
  stopping.max_iter = 0;
  const auto trace =
      run_scheme(geom, op, SchemeKind::nt, vec2(1, 0), Schedule::harmonic(),
                 Schedule::constant_alpha(0.5), sampler, stopping);
  CHECK(trace.stop_reason == "max_iter");
  CHECK(trace.rows.size() == 1);
}

TEST_CASE("non-nested scheme converges on the contraction") {
  const Geometry geom(2, 2.0);
  const auto op = OperatorSpec::contraction(2, 0.5);
  SamplerConfig sampler;
  sampler.seed = 21;
  sampler.samples_per_round = 1024;
  StoppingRule stopping;
  stopping.max_iter = 60;
  stopping.stop_tol = 1e-4;
  const auto trace =
      run_scheme(geom, op, SchemeKind::mt, vec2(0.8, 0.6),
                 Schedule::harmonic(), Schedule::constant_alpha(0.5), sampler,
                 stopping);
  CHECK(trace.rows.back().fixed_dist <= 1e-2);
  // anchor distances never decrease and stay below ||x - u||
  for (size_t i = 1; i < trace.rows.size(); ++i)
    CHECK(trace.rows[i].anchor_dist >= trace.rows[i - 1].anchor_dist - 1e-9);
  for (const auto& row : trace.rows) {
    CHECK(row.anchor_dist <= vec2(0.8, 0.6).norm() + 1e-7);
    CHECK(row.dn_violation <= 1e-8);
  }
}

TEST_CASE("nested runs are bit-identical across repeats") {
  const Geometry geom(2, 2.0);
  const auto op = OperatorSpec::contraction(2, 0.5);
  SamplerConfig sampler;
  sampler.seed = 33;
  StoppingRule stopping;
  stopping.max_iter = 5;
  auto run = [&] {
    return to_csv(run_scheme(geom, op, SchemeKind::nested, vec2(0.9, -0.4),
                             Schedule::harmonic(), Schedule::constant_alpha(0.5),
                             sampler, stopping));
  };
  CHECK(run() == run());
}

TEST_CASE("errors carry the iteration index") {
  // rotation never meets a tight residual tolerance; the shrinking level
  // sets eventually come up empty and the error names the iteration
  const Geometry geom(2, 2.0);
  const auto op = OperatorSpec::rotation(1.0);
  SamplerConfig sampler;
  sampler.seed = 2;
  sampler.samples_per_round = 32;
  StoppingRule stopping;
  stopping.max_iter = 400;
  stopping.stop_tol = 1e-12;
  try {
    run_scheme(geom, op, SchemeKind::nested, vec2(1, 0), Schedule::harmonic(),
               Schedule::constant_alpha(0.5), sampler, stopping);
    // an empty level set is the expected outcome but max_iter is also fine
  } catch (const EmptyLevelSet& e) {
    CHECK(std::string(e.what()).find("iteration") != std::string::npos);
  }
}
