#include <chrono>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "endcert/contraction.hpp"
#include "endcert/gauge.hpp"
#include "endcert/solver.hpp"
#include "run_config.hpp"

namespace {

using namespace endcert;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolated = 2;
constexpr int kExitNotConverged = 3;

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cli::ConfigError("cannot write output file \"" + path + "\"");
  out << contents;
}

std::string with_index(const std::string& path, std::size_t i) {
  const auto dot = path.rfind('.');
  if (dot == std::string::npos) return path + "-" + std::to_string(i);
  return path.substr(0, dot) + "-" + std::to_string(i) + path.substr(dot);
}

int cmd_certify(const std::string& config_path, const cli::Overrides& ov) {
  const cli::RunConfig cfg = cli::load_config(config_path, ov);
  const std::string out_path = ov.out.value_or(cfg.out_report);
  const MapPair pair = cli::make_pair(cfg);
  const CertificationReport report =
      certify(pair, cfg.gauges, cfg.domain, cfg.sampler, cfg.certify_tol, cfg.violation_cap);
  write_file(out_path, report_to_json(report).dump(2) + "\n");
  std::cout << (report.certified ? "certified" : "violated") << ": " << report.n_points
            << " pairs, min residual " << report.min_residual << ", " << report.n_violations
            << " violation(s); report written to " << out_path << "\n";
  return report.certified ? kExitOk : kExitViolated;
}

int cmd_solve(const std::string& config_path, const cli::Overrides& ov) {
  const cli::RunConfig cfg = cli::load_config(config_path, ov);
  const std::string out_path = ov.out.value_or(cfg.out_result);
  const MapPair pair = cli::make_pair(cfg);

  if (cfg.starts.size() == 1) {
    const EndpointResult r =
        solve(pair, cfg.gauges, Point(cfg.starts[0]), cfg.strategy, cfg.solver_tol, cfg.max_iter);
    std::ofstream trace_out(cfg.out_trace, std::ios::binary);
    if (!trace_out) throw cli::ConfigError("cannot write trace file \"" + cfg.out_trace + "\"");
    write_trace_csv(trace_out, *r.trace);
    write_file(out_path, endpoint_result_to_json(r).dump(2) + "\n");
    std::cout << (r.is_endpoint ? "end point" : "not verified") << ": z = " << r.z.scalar() << ", delta_T = "
              << r.delta_T << ", delta_S = " << r.delta_S << " after " << r.trace->iterations_used
              << " iteration(s); result written to " << out_path << "\n";
    return (r.trace->converged && r.is_endpoint) ? kExitOk : kExitNotConverged;
  }

  std::vector<Point> starts;
  starts.reserve(cfg.starts.size());
  for (double x : cfg.starts) starts.push_back(Point(x));
  const MultistartResult r =
      multistart_uniqueness_probe(pair, cfg.gauges, starts, cfg.strategy, cfg.solver_tol, cfg.max_iter);
  for (std::size_t i = 0; i < r.runs.size(); ++i) {
    std::ofstream trace_out(with_index(cfg.out_trace, i), std::ios::binary);
    if (!trace_out) throw cli::ConfigError("cannot write trace file \"" + with_index(cfg.out_trace, i) + "\"");
    write_trace_csv(trace_out, *r.runs[i].trace);
  }
  write_file(out_path, multistart_result_to_json(r, starts).dump(2) + "\n");
  bool all_ok = r.failed_starts.empty();
  for (const auto& run : r.runs) all_ok = all_ok && run.is_endpoint;
  std::cout << r.endpoints.size() << " end point cluster(s) from " << starts.size() << " start(s), unique="
            << (r.unique ? "true" : "false") << "; result written to " << out_path << "\n";
  return all_ok ? kExitOk : kExitNotConverged;
}

int cmd_gauge_check(const std::string& gauge_json, const std::string& cls_name) {
  nlohmann::json spec;
  try {
    spec = nlohmann::json::parse(gauge_json);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed gauge JSON: " << e.what() << "\n";
    return kExitUsage;
  }
  GaugeClass cls;
  if (cls_name == "phi") {
    cls = GaugeClass::Phi;
  } else if (cls_name == "omega") {
    cls = GaugeClass::Omega;
  } else if (cls_name == "psi") {
    cls = GaugeClass::Psi;
  } else {
    std::cerr << "error: unknown class \"" << cls_name << "\" (expected phi, omega or psi)\n";
    return kExitUsage;
  }
  GaugeFn g = GaugeFn::zero();
  try {
    g = gauge_from_json(spec);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  const ClassReport report = check_class(g, cls);
  std::cout << class_report_to_json(report).dump(2) << "\n";
  return report.pass ? kExitOk : kExitViolated;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certify generalized weakly-contractive conditions and compute common end points of set-valued map pairs"};
  app.require_subcommand(1);

  cli::Overrides ov;
  std::string config_path;
  std::string gauge_json;
  std::string cls_name;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "run configuration JSON file")->required();
    cmd->add_option("--tol", ov.tol, "override tolerance");
    cmd->add_option("--seed", ov.seed, "override sampler and strategy seeds");
    cmd->add_option("--max-iter", ov.max_iter, "override solver iteration cap");
    cmd->add_option("--strategy", ov.strategy, "override selection strategy (nearest|midpoint|sup-endpoint|random)");
    cmd->add_option("--out", ov.out, "override primary output path");
  };

  CLI::App* certify_cmd = app.add_subcommand("certify", "sample the contraction condition over the domain");
  add_common(certify_cmd);
  CLI::App* solve_cmd = app.add_subcommand("solve", "run the end point iteration from the configured starts");
  add_common(solve_cmd);
  CLI::App* gauge_cmd = app.add_subcommand("gauge-check", "verify a gauge against one of the classes");
  gauge_cmd->add_option("gauge", gauge_json, "gauge spec JSON, e.g. {\"kind\":\"linear\",\"k\":0.25}")->required();
  gauge_cmd->add_option("--class", cls_name, "class to check: phi, omega or psi")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_name() == "CallForHelp" ? kExitOk : kExitUsage;
  }

  try {
    if (certify_cmd->parsed()) return cmd_certify(config_path, ov);
    if (solve_cmd->parsed()) return cmd_solve(config_path, ov);
    if (gauge_cmd->parsed()) return cmd_gauge_check(gauge_json, cls_name);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
