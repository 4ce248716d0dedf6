#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "endcert/contraction.hpp"
#include "endcert/gauge.hpp"
#include "endcert/map_dsl.hpp"
#include "endcert/metric.hpp"
#include "endcert/solver.hpp"

namespace endcert {
namespace cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One run: space, domain box, both map sources, gauges, sampler and
/// solver settings, output paths. Field precedence at the command
/// line is flag > config > default.
struct RunConfig {
  MetricSpace space = MetricSpace::real_line();
  DomainBox domain;
  std::string t_source;
  std::string s_source;  // may equal "same-as-T"
  dsl::MapDef t_def;
  dsl::MapDef s_def;
  GaugeTriple gauges{GaugeFn::identity(), GaugeFn::linear(0.5), GaugeFn::zero()};
  SamplerSpec sampler;
  std::vector<double> starts{0.0};
  SelectionStrategy strategy;
  double solver_tol = 1e-10;
  int max_iter = 100000;
  double certify_tol = 1e-12;
  int violation_cap = 100;
  std::string out_report = "report.json";
  std::string out_result = "result.json";
  std::string out_trace = "trace.csv";
};

struct Overrides {
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_iter;
  std::optional<std::string> strategy;
  std::optional<std::string> out;
};

/// Loads and validates a config file. Throws ConfigError with a
/// human-readable diagnostic on any problem (missing file, malformed
/// JSON, DSL parse errors, gauge class failures, uncovered domain).
RunConfig load_config(const std::string& path, const Overrides& overrides);

MapPair make_pair(const RunConfig& cfg);

}  // namespace cli
}  // namespace endcert
