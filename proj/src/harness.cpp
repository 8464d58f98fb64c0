#include "hybridproj/harness.hpp"

#include <cmath>

namespace hybridproj {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* key : allowed)
      if (it.key() == key) {
        ok = true;
        break;
      }
    if (!ok) throw SchemaError("unknown key '" + it.key() + "'", path);
  }
}

double need_number(const json& obj, const char* key, const std::string& path,
                   double fallback, bool required = false) {
  if (!obj.contains(key)) {
    if (required) throw SchemaError("missing key", path + "/" + key);
    return fallback;
  }
  if (!obj[key].is_number())
    throw SchemaError("expected a number", path + "/" + key);
  return obj[key].get<double>();
}

Eigen::VectorXd need_vector(const json& obj, const char* key,
                            const std::string& path) {
  const json& arr = obj.at(key);
  if (!arr.is_array() || arr.empty())
    throw SchemaError("expected a nonempty array", path + "/" + key);
  Eigen::VectorXd v(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number())
      throw SchemaError("expected a number",
                        path + "/" + key + "/" + std::to_string(i));
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return v;
}

Schedule parse_t_schedule(const json& j, const std::string& path) {
  reject_unknown(j, path, {"kind", "c", "c_prime", "ratio"});
  const std::string kind = j.value("kind", "harmonic");
  if (kind == "harmonic")
    return Schedule::harmonic(need_number(j, "c", path, 1.0),
                              need_number(j, "c_prime", path, 1.0));
  if (kind == "geometric")
    return Schedule::geometric(need_number(j, "c", path, 1.0),
                               need_number(j, "ratio", path, 0.5));
  throw SchemaError("t_schedule kind must be harmonic or geometric",
                    path + "/kind");
}

}  // namespace

OperatorSpec ExperimentConfig::build_operator() const {
  switch (operator_kind) {
    case OperatorKind::contraction_scale:
      return OperatorSpec::contraction(dim, op_lambda);
    case OperatorKind::rotation:
      return OperatorSpec::rotation(op_theta,
                                    op_radius > 0.0 ? op_radius : 4.0);
    case OperatorKind::gk_truncated:
      return OperatorSpec::gk_truncated(dim);
    case OperatorKind::projection_onto_box: {
      const double hw = op_radius > 0.0 ? op_radius : 1.0;
      return OperatorSpec::box_projection(Box::cube(dim, hw),
                                          Box(op_target_lower, op_target_upper));
    }
    case OperatorKind::composite:
      return OperatorSpec::composite(op_theta, op_lambda,
                                     op_radius > 0.0 ? op_radius : 2.0);
  }
  throw SemanticError("unreachable operator kind");
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what(), "/");
  }
  return parse_config_json(j);
}

ExperimentConfig parse_config_json(const json& j) {
  if (!j.is_object()) throw SchemaError("config must be an object", "/");
  reject_unknown(j, "/", {"space", "operator", "scheme", "sampler", "anchor",
                          "stopping", "output"});
  ExperimentConfig cfg;

  const json& space = j.at("space");
  reject_unknown(space, "/space", {"p", "dim"});
  cfg.p = need_number(space, "p", "/space", 2.0, true);
  cfg.dim = static_cast<int>(need_number(space, "dim", "/space", 2.0, true));
  if (!(cfg.p > 1.0) || !std::isfinite(cfg.p))
    throw SemanticError("exponent must satisfy 1 < p < infinity");
  if (cfg.dim < 1) throw SemanticError("dim must be >= 1");

  const json& op = j.at("operator");
  reject_unknown(op, "/operator", {"kind", "params"});
  const std::string kind = op.value("kind", "");
  const json params = op.value("params", json::object());
  reject_unknown(params, "/operator/params",
                 {"lambda", "theta", "radius", "target_lower", "target_upper"});
  if (kind == "contraction_scale") {
    cfg.operator_kind = OperatorKind::contraction_scale;
    cfg.op_lambda = need_number(params, "lambda", "/operator/params", 0.5);
  } else if (kind == "rotation") {
    cfg.operator_kind = OperatorKind::rotation;
    cfg.op_theta = need_number(params, "theta", "/operator/params", 1.0);
    cfg.op_radius = need_number(params, "radius", "/operator/params", 0.0);
  } else if (kind == "gk_truncated") {
    cfg.operator_kind = OperatorKind::gk_truncated;
  } else if (kind == "projection_onto_box") {
    cfg.operator_kind = OperatorKind::projection_onto_box;
    cfg.op_radius = need_number(params, "radius", "/operator/params", 0.0);
    cfg.op_target_lower = need_vector(params, "target_lower", "/operator/params");
    cfg.op_target_upper = need_vector(params, "target_upper", "/operator/params");
  } else if (kind == "composite") {
    cfg.operator_kind = OperatorKind::composite;
    cfg.op_theta = need_number(params, "theta", "/operator/params", 1.0);
    cfg.op_lambda = need_number(params, "lambda", "/operator/params", 0.5);
    cfg.op_radius = need_number(params, "radius", "/operator/params", 0.0);
  } else {
    throw SchemaError("unknown operator kind '" + kind + "'",
                      "/operator/kind");
  }

  const json& scheme = j.at("scheme");
  reject_unknown(scheme, "/scheme", {"name", "t_schedule", "alpha_schedule"});
  const std::string name = scheme.value("name", "");
  if (name == "nested")
    cfg.scheme = SchemeKind::nested;
  else if (name == "mt")
    cfg.scheme = SchemeKind::mt;
  else if (name == "nt")
    cfg.scheme = SchemeKind::nt;
  else
    throw SchemaError("scheme name must be nested, mt or nt", "/scheme/name");
  if (scheme.contains("t_schedule"))
    cfg.t_schedule = parse_t_schedule(scheme["t_schedule"], "/scheme/t_schedule");
  if (scheme.contains("alpha_schedule")) {
    const json& a = scheme["alpha_schedule"];
    reject_unknown(a, "/scheme/alpha_schedule", {"kind", "alpha"});
    cfg.alpha_schedule = Schedule::constant_alpha(
        need_number(a, "alpha", "/scheme/alpha_schedule", 0.5));
  }

  if (j.contains("sampler")) {
    const json& s = j["sampler"];
    reject_unknown(s, "/sampler",
                   {"samples_per_round", "importance_fraction", "seed",
                    "max_hull_vertices"});
    cfg.sampler.samples_per_round = static_cast<int>(
        need_number(s, "samples_per_round", "/sampler", 512.0));
    cfg.sampler.importance_fraction =
        need_number(s, "importance_fraction", "/sampler", 0.5);
    cfg.sampler.seed = static_cast<std::uint64_t>(
        need_number(s, "seed", "/sampler", 0.0));
    cfg.sampler.max_hull_vertices = static_cast<int>(
        need_number(s, "max_hull_vertices", "/sampler", 0.0));
  }

  cfg.anchor = need_vector(j, "anchor", "");

  if (j.contains("stopping")) {
    const json& s = j["stopping"];
    reject_unknown(s, "/stopping", {"max_iter", "stop_tol", "proj_tol"});
    cfg.stopping.max_iter =
        static_cast<int>(need_number(s, "max_iter", "/stopping", 500.0));
    cfg.stopping.stop_tol = need_number(s, "stop_tol", "/stopping", 1e-6);
    cfg.stopping.proj_tol = need_number(s, "proj_tol", "/stopping", 1e-9);
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    reject_unknown(o, "/output", {"csv_path"});
    if (o.contains("csv_path")) {
      if (!o["csv_path"].is_string())
        throw SchemaError("expected a string", "/output/csv_path");
      cfg.csv_path = o["csv_path"].get<std::string>();
    }
  }

  // Cross-field semantics.
  if (cfg.scheme == SchemeKind::nt && cfg.p != 2.0)
    throw SemanticError("scheme nt is the Hilbert-space scheme: requires p = 2");
  if (cfg.stopping.max_iter < 0)
    throw SemanticError("max_iter must be >= 0");
  if (!(cfg.stopping.stop_tol > 0.0) || !(cfg.stopping.proj_tol > 0.0))
    throw SemanticError("tolerances must be positive");
  if (cfg.anchor.size() != cfg.dim)
    throw SemanticError("anchor dimension does not match space.dim");
  cfg.sampler.validate(cfg.dim);
  const OperatorSpec built = cfg.build_operator();  // validates params
  if (built.dim() != cfg.dim)
    throw SemanticError("operator dimension does not match space.dim");
  if ((cfg.scheme == SchemeKind::mt || cfg.scheme == SchemeKind::nt) &&
      !built.nonexpansive())
    throw SemanticError("schemes mt/nt require a nonexpansive operator");

  // Normalized echo with defaults applied.
  cfg.echo = {
      {"space", {{"p", cfg.p}, {"dim", cfg.dim}}},
      {"operator", {{"kind", kind}, {"params", params}}},
      {"scheme", {{"name", name}}},
      {"sampler",
       {{"samples_per_round", cfg.sampler.samples_per_round},
        {"importance_fraction", cfg.sampler.importance_fraction},
        {"seed", cfg.sampler.seed},
        {"max_hull_vertices", cfg.sampler.hull_cap(cfg.dim)}}},
      {"anchor", std::vector<double>(cfg.anchor.data(),
                                     cfg.anchor.data() + cfg.anchor.size())},
      {"stopping",
       {{"max_iter", cfg.stopping.max_iter},
        {"stop_tol", cfg.stopping.stop_tol},
        {"proj_tol", cfg.stopping.proj_tol}}},
  };
  if (cfg.scheme == SchemeKind::nt)
    cfg.echo["scheme"]["alpha"] = cfg.alpha_schedule.alpha;
  else
    cfg.echo["scheme"]["t_schedule"] = {
        {"kind", cfg.t_schedule.kind == Schedule::Kind::harmonic ? "harmonic"
                                                                 : "geometric"},
        {"c", cfg.t_schedule.c},
        {"c_prime", cfg.t_schedule.c_prime},
        {"ratio", cfg.t_schedule.ratio}};
  return cfg;
}

RunTrace run_experiment(const ExperimentConfig& cfg) {
  const Geometry geom = cfg.geometry();
  const OperatorSpec op = cfg.build_operator();
  RunTrace trace =
      run_scheme(geom, op, cfg.scheme, cfg.anchor, cfg.t_schedule,
                 cfg.alpha_schedule, cfg.sampler, cfg.stopping,
                 cfg.echo.dump());
  if (!cfg.csv_path.empty()) write_csv_file(trace, cfg.csv_path);
  return trace;
}

nlohmann::json check_report(const RunTrace& trace,
                            const std::vector<Eigen::VectorXd>& known_fixed) {
  json report;
  double p = 2.0;
  if (!trace.config_echo.empty()) {
    const json echo = json::parse(trace.config_echo, nullptr, false);
    if (echo.is_object() && echo.contains("space"))
      p = echo["space"].value("p", 2.0);
  }
  const Geometry geom(std::max(trace.dim, 1), p);

  // Anchor distances must be nondecreasing (nested regions).
  double worst_drop = 0.0;
  for (size_t i = 1; i < trace.rows.size(); ++i)
    worst_drop = std::max(
        worst_drop, trace.rows[i - 1].anchor_dist - trace.rows[i].anchor_dist);
  report["monotone_anchor_distance"] = {{"pass", worst_drop <= 1e-9},
                                        {"max_drop", worst_drop}};

  // ||x - x_{n+1}|| <= ||x - u|| for every known fixed point u.
  if (!known_fixed.empty() && !trace.rows.empty()) {
    const Eigen::VectorXd& anchor = trace.rows.front().x;
    double bound = std::numeric_limits<double>::infinity();
    for (const auto& u : known_fixed)
      bound = std::min(bound, norm(geom, anchor - u));
    double excess = 0.0;
    for (const auto& r : trace.rows)
      excess = std::max(excess, r.anchor_dist - bound);
    report["anchor_distance_bound"] = {{"pass", excess <= 1e-7},
                                       {"max_excess", excess},
                                       {"bound", bound}};
  } else {
    report["anchor_distance_bound"] = {{"pass", true}, {"skipped", true}};
  }

  // Fixed points satisfy every accumulated D half-space.
  double worst_dn = 0.0;
  bool any_dn = false;
  for (const auto& r : trace.rows)
    if (!std::isnan(r.dn_violation)) {
      any_dn = true;
      worst_dn = std::max(worst_dn, r.dn_violation);
    }
  if (any_dn)
    report["fixed_point_feasibility"] = {{"pass", worst_dn <= 1e-8},
                                         {"max_violation", worst_dn}};
  else
    report["fixed_point_feasibility"] = {{"pass", true}, {"skipped", true}};

  // Projection certificates along the run.
  double worst_vi = 0.0;
  for (const auto& r : trace.rows)
    if (!std::isnan(r.vi_residual))
      worst_vi = std::min(worst_vi, r.vi_residual);
  report["vi_certificates"] = {{"pass", worst_vi >= -1e-7},
                               {"min_certificate", worst_vi}};

  const double final_res =
      trace.rows.empty() ? std::nan("") : trace.rows.back().res_T;
  report["converged"] = {{"pass", trace.stop_reason == "residual"},
                         {"stop_reason", trace.stop_reason},
                         {"final_residual", final_res}};
  if (!trace.rows.empty() && !std::isnan(trace.rows.back().fixed_dist))
    report["final_fixed_distance"] = trace.rows.back().fixed_dist;

  bool all = true;
  for (const auto& [key, value] : report.items())
    if (value.is_object() && value.contains("pass") &&
        !value["pass"].get<bool>())
      all = false;
  report["pass"] = all;
  return report;
}

std::vector<RunTrace> run_sweep(const nlohmann::json& base,
                                const std::string& pointer,
                                const std::vector<nlohmann::json>& values) {
  std::vector<RunTrace> traces;
  for (size_t i = 0; i < values.size(); ++i) {
    json patched = base;
    try {
      patched[json::json_pointer(pointer)] = values[i];
    } catch (const json::exception& e) {
      throw SchemaError(std::string("bad sweep pointer: ") + e.what(), pointer);
    }
    ExperimentConfig cfg = parse_config_json(patched);
    if (!cfg.csv_path.empty()) {
      const auto dot = cfg.csv_path.rfind(".csv");
      const std::string suffix = "_" + std::to_string(i);
      cfg.csv_path = dot == std::string::npos
                         ? cfg.csv_path + suffix
                         : cfg.csv_path.substr(0, dot) + suffix + ".csv";
    }
    traces.push_back(run_experiment(cfg));
  }
  return traces;
}

}  // namespace hybridproj
