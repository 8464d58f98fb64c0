#ifndef HYBRIDPROJ_HARNESS_HPP
#define HYBRIDPROJ_HARNESS_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "hybridproj/operators.hpp"
#include "hybridproj/schemes.hpp"
#include "hybridproj/trace.hpp"

namespace hybridproj {

struct ExperimentConfig {
  double p = 2.0;
  int dim = 2;
  OperatorKind operator_kind = OperatorKind::contraction_scale;
  double op_lambda = 0.5;
  double op_theta = 1.0;
  double op_radius = 0.0;  // 0 -> kind default
  Eigen::VectorXd op_target_lower, op_target_upper;  // projection_onto_box
  SchemeKind scheme = SchemeKind::nested;
  Schedule t_schedule = Schedule::harmonic();
  Schedule alpha_schedule = Schedule::constant_alpha(0.5);
  SamplerConfig sampler;
  Eigen::VectorXd anchor;
  StoppingRule stopping;
  std::string csv_path;

  nlohmann::json echo;  // normalized config, sorted keys

  Geometry geometry() const { return Geometry(dim, p); }
  OperatorSpec build_operator() const;
};

/// Parses and validates a JSON config.  Unknown keys are rejected with a
/// SchemaError carrying a JSON-pointer path; value-level violations (p <= 1,
/// scheme nt with p != 2, nonpositive tolerances, ...) raise SemanticError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_json(const nlohmann::json& j);

/// Runs the configured scheme; writes the CSV when csv_path is set.
RunTrace run_experiment(const ExperimentConfig& cfg);

/// Evaluates the scheme invariants against a finished trace.  Geometry is
/// recovered from the trace's config echo (Euclidean fallback).  Returns a
/// machine-readable report: per-invariant pass flags and measured slacks,
/// plus a top-level "pass".
nlohmann::json check_report(const RunTrace& trace,
                            const std::vector<Eigen::VectorXd>& known_fixed);

/// One run per value patched into the base config at `pointer`
/// (JSON-pointer syntax); each run's CSV gets a "_<index>" suffix.
/// Returns the traces in value order.
std::vector<RunTrace> run_sweep(const nlohmann::json& base,
                                const std::string& pointer,
                                const std::vector<nlohmann::json>& values);

}  // namespace hybridproj

#endif  // HYBRIDPROJ_HARNESS_HPP
