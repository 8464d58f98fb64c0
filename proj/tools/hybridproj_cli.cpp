#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hybridproj/harness.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw hybridproj::SchemaError("cannot open config file", path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitCheckFailed = 4;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid metric-projection fixed-point experiment runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string sweep_param;
  std::vector<std::string> sweep_values;

  auto* run = app.add_subcommand("run", "Execute one experiment");
  run->add_option("config", config_path, "JSON config file")->required();

  auto* check =
      app.add_subcommand("check", "Run and evaluate the invariant report");
  check->add_option("config", config_path, "JSON config file")->required();

  auto* sweep = app.add_subcommand("sweep", "Run once per parameter value");
  sweep->add_option("config", config_path, "JSON config file")->required();
  sweep->add_option("--param", sweep_param, "JSON pointer to the swept value")
      ->required();
  sweep->add_option("--values", sweep_values, "values (JSON scalars)")
      ->required()
      ->expected(-1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const auto cfg = hybridproj::parse_config(slurp(config_path));
      const auto trace = hybridproj::run_experiment(cfg);
      std::cout << "stopped: " << trace.stop_reason << " after "
                << trace.rows.size() - 1 << " iterations, final residual "
                << trace.rows.back().res_T << "\n";
      if (!cfg.csv_path.empty())
        std::cout << "trace written to " << cfg.csv_path << "\n";
    } else if (check->parsed()) {
      const auto cfg = hybridproj::parse_config(slurp(config_path));
      const auto trace = hybridproj::run_experiment(cfg);
      const auto report = hybridproj::check_report(
          trace, cfg.build_operator().known_fixed_points());
      std::cout << report.dump(2) << "\n";
      if (!report["pass"].get<bool>()) return kExitCheckFailed;
    } else if (sweep->parsed()) {
      nlohmann::json base;
      try {
        base = nlohmann::json::parse(slurp(config_path));
      } catch (const nlohmann::json::parse_error& e) {
        throw hybridproj::SchemaError(std::string("invalid JSON: ") + e.what(),
                                      "/");
      }
      std::vector<nlohmann::json> values;
      for (const auto& v : sweep_values) {
        auto parsed = nlohmann::json::parse(v, nullptr, false);
        values.push_back(parsed.is_discarded() ? nlohmann::json(v) : parsed);
      }
      const auto traces = hybridproj::run_sweep(base, sweep_param, values);
      for (size_t i = 0; i < traces.size(); ++i)
        std::cout << sweep_param << " = " << values[i].dump() << ": "
                  << traces[i].stop_reason << " after "
                  << traces[i].rows.size() - 1 << " iterations\n";
    }
  } catch (const hybridproj::SchemaError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const hybridproj::SemanticError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
