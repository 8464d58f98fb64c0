#ifndef HYBRIDPROJ_SCHEMES_HPP
#define HYBRIDPROJ_SCHEMES_HPP

#include <Eigen/Dense>
#include <string>

#include "hybridproj/levelset.hpp"
#include "hybridproj/operators.hpp"
#include "hybridproj/projection.hpp"
#include "hybridproj/trace.hpp"

namespace hybridproj {

enum class SchemeKind { nested, mt, nt };

std::string to_string(SchemeKind kind);

/// Produces either t_n in (0,1) with t_n -> 0 (harmonic, geometric) or a
/// constant relaxation weight alpha_n in [0, 1).
struct Schedule {
  enum class Kind { harmonic, geometric, constant_alpha };
  Kind kind = Kind::harmonic;
  double c = 1.0;        // harmonic / geometric scale
  double c_prime = 1.0;  // harmonic shift
  double ratio = 0.5;    // geometric ratio
  double alpha = 0.5;    // constant_alpha value

  static Schedule harmonic(double c = 1.0, double c_prime = 1.0);
  static Schedule geometric(double c = 1.0, double ratio = 0.5);
  static Schedule constant_alpha(double alpha);

  /// t_n for n >= 1 (harmonic/geometric kinds only).
  double t(int n) const;
  /// alpha_n for n >= 0 (constant_alpha kind only).
  double alpha_at(int n) const;
};

struct StoppingRule {
  int max_iter = 500;
  double stop_tol = 1e-6;
  double proj_tol = 1e-9;
};

struct SchemeState {
  int n = 1;  // the nested/MT index; NT starts at 0
  Eigen::VectorXd anchor;   // the fixed x
  Eigen::VectorXd current;  // x_n
  std::vector<HalfSpace> dn_halfspaces;
  FeasibleRegion cn_region;
  bool has_region = false;
  RunTrace trace;
};

/// Half-space {z : <z, J(anchor - xn)> <= <xn, J(anchor - xn)>}, the linear
/// rewrite of <xn - z, J(anchor - xn)> >= 0.  The boundary passes through
/// xn.  Throws DegenerateHalfSpace when anchor == xn (J(0) = 0); callers
/// treat that as the whole space.
HalfSpace make_dn_halfspace(const Geometry& geom, const Eigen::VectorXd& xn,
                            const Eigen::VectorXd& anchor);

SchemeState init_state(const Geometry& geom, const OperatorSpec& op,
                       const Eigen::VectorXd& anchor, SchemeKind kind);

/// One iteration of the nested scheme: level set of T^n inside C_{n-1},
/// hull assembly, one more D half-space, projection of the anchor.
void step_nested(const Geometry& geom, const OperatorSpec& op,
                 SchemeState& state, const Schedule& t_sched,
                 const SamplerConfig& sampler, double tol);

/// One iteration of the Hilbert-space scheme (p = 2 only): relaxation
/// point y_n, half-space forms of C_n and Q_n, Euclidean projection.
void step_nakajo_takahashi(const Geometry& geom, const OperatorSpec& op,
                           SchemeState& state, const Schedule& alpha_sched,
                           double tol);

/// One iteration with fixed power 1 and non-nested sets: the level set of
/// T over all of C, and a single fresh D half-space.
void step_matsushita_takahashi(const Geometry& geom, const OperatorSpec& op,
                               SchemeState& state, const Schedule& t_sched,
                               const SamplerConfig& sampler, double tol);

/// Drives the chosen step function until ||x_n - T x_n|| <= stop_tol
/// ("residual") or the iteration cap ("max_iter").
RunTrace run_scheme(const Geometry& geom, const OperatorSpec& op,
                    SchemeKind kind, const Eigen::VectorXd& anchor,
                    const Schedule& t_sched, const Schedule& alpha_sched,
                    const SamplerConfig& sampler, const StoppingRule& stopping,
                    const std::string& config_echo = "");

}  // namespace hybridproj

#endif  // HYBRIDPROJ_SCHEMES_HPP
