#include <doctest.h>

#include <cmath>
#include <random>

#include "hybridproj/space.hpp"

using namespace hybridproj;
using Eigen::VectorXd;

namespace {

VectorXd vec2(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("geometry rejects non-smooth exponents") {
  CHECK_THROWS_AS(Geometry(2, 1.0), SemanticError);
  CHECK_THROWS_AS(Geometry(2, 0.5), SemanticError);
  CHECK_THROWS_AS(Geometry(2, std::numeric_limits<double>::infinity()),
                  SemanticError);
  CHECK_THROWS_AS(Geometry(0, 2.0), DimensionError);
  CHECK(Geometry(3, 1.5).dual_exponent() == doctest::Approx(3.0));
  CHECK(Geometry(3, 4.0).dual_exponent() == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("lp norm closed forms") {
  CHECK(norm(Geometry(2, 2.0), vec2(3, 4)) == doctest::Approx(5.0));
  CHECK(norm(Geometry(2, 3.0), VectorXd::Zero(2)) == 0.0);
  // high-precision scalar oracle for (1,1) in l3: (1 + 1)^(1/3)
  const long double expected = std::pow(2.0L, 1.0L / 3.0L);
  CHECK(norm(Geometry(2, 3.0), vec2(1, 1)) ==
        doctest::Approx(static_cast<double>(expected)).epsilon(1e-14));
  CHECK_THROWS_AS(norm(Geometry(3, 2.0), vec2(1, 1)), DimensionError);
}

TEST_CASE("norm is robust to extreme scales") {
  VectorXd big = vec2(1e200, 1e200);
  CHECK(norm(Geometry(2, 4.0), big) ==
        doctest::Approx(1e200 * std::pow(2.0, 0.25)));
  VectorXd small = vec2(1e-200, 0);
  CHECK(norm(Geometry(2, 4.0), small) == doctest::Approx(1e-200));
}

TEST_CASE("duality map examples") {
  const VectorXd x = vec2(3, 4);
  const VectorXd j2 = duality_map(Geometry(2, 2.0), x);
  CHECK(j2[0] == 3.0);  // p = 2: exact copy
  CHECK(j2[1] == 4.0);

  CHECK(duality_map(Geometry(2, 3.0), VectorXd::Zero(2)).norm() == 0.0);

  // p = 4, x = (1,1): ||x||_4 = 2^(1/4), J(x) = (2^(-1/2), 2^(-1/2))
  const Geometry g4(2, 4.0);
  const VectorXd j4 = duality_map(g4, vec2(1, 1));
  CHECK(j4[0] == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-14));
  CHECK(j4[1] == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-14));
  const double nx = norm(g4, vec2(1, 1));
  CHECK(pairing(vec2(1, 1), j4) == doctest::Approx(nx * nx).epsilon(1e-12));
  CHECK(dual_norm(g4, j4) == doctest::Approx(nx).epsilon(1e-12));
}

TEST_CASE("duality map identities over random vectors") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 2.0);
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    for (int d : {1, 2, 3, 8}) {
      const Geometry geom(d, p);
      for (int rep = 0; rep < 500; ++rep) {
        VectorXd x(d);
        for (int i = 0; i < d; ++i) x[i] = gauss(rng);
        const VectorXd j = duality_map(geom, x);
        const double nx = norm(geom, x);
        CHECK(std::abs(pairing(x, j) - nx * nx) <= 1e-9 * (1.0 + nx * nx));
        CHECK(std::abs(dual_norm(geom, j) - nx) <= 1e-9 * (1.0 + nx));
      }
    }
  }
}

TEST_CASE("duality map homogeneity and oddness") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> scale(0.0, 3.0);
  for (double p : {1.5, 3.0, 4.0}) {
    const Geometry geom(3, p);
    for (int rep = 0; rep < 200; ++rep) {
      VectorXd x(3);
      for (int i = 0; i < 3; ++i) x[i] = gauss(rng);
      const double lam = scale(rng);
      const VectorXd lhs = duality_map(geom, (lam * x).eval());
      const VectorXd rhs = lam * duality_map(geom, x);
      CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() <= 1e-10);
      const VectorXd neg = duality_map(geom, (-x).eval());
      CHECK((neg + duality_map(geom, x)).lpNorm<Eigen::Infinity>() <= 1e-10);
    }
  }
}

TEST_CASE("p=2 duality map is a bitwise copy") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Geometry geom(4, 2.0);
  VectorXd x(4);
  for (int i = 0; i < 4; ++i) x[i] = gauss(rng);
  const VectorXd j = duality_map(geom, x);
  for (int i = 0; i < 4; ++i) CHECK(j[i] == x[i]);
}
