#include "run_config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace endcert {
namespace cli {

namespace {

using nlohmann::json;

[[noreturn]] void bail(const std::string& msg) { throw ConfigError(msg); }

DomainBox parse_domain(const json& j) {
  DomainBox box;
  if (!j.is_array() || j.empty()) bail("\"domain\" must be [lo, hi] or a list of [lo, hi] axes");
  if (j[0].is_number()) {
    if (j.size() != 2) bail("1-d \"domain\" must be [lo, hi]");
    box.axes.push_back({j[0].get<double>(), j[1].get<double>()});
  } else {
    for (const auto& ax : j) {
      if (!ax.is_array() || ax.size() != 2 || !ax[0].is_number() || !ax[1].is_number())
        bail("each domain axis must be [lo, hi]");
      box.axes.push_back({ax[0].get<double>(), ax[1].get<double>()});
    }
  }
  for (const auto& ax : box.axes)
    if (!(ax[0] <= ax[1])) bail("domain axis has lo > hi");
  return box;
}

dsl::MapDef parse_map_source(const std::string& src, const char* which) {
  auto result = dsl::parse(src);
  if (const auto* err = std::get_if<dsl::ParseError>(&result)) {
    std::ostringstream os;
    os << which << " map: parse error at line " << err->line << ", column " << err->column << ": " << err->message
       << " (near \"" << err->token << "\")";
    bail(os.str());
  }
  return std::get<dsl::MapDef>(std::move(result));
}

MetricSpace parse_space(const json& j) {
  if (!j.is_object() || !j.contains("kind")) bail("\"space\" needs a \"kind\"");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "real-line") return MetricSpace::real_line();
  if (kind == "euclidean") return MetricSpace::euclidean(j.value("dim", 1));
  if (kind == "chebyshev") return MetricSpace::chebyshev(j.value("dim", 1));
  bail("unsupported space kind \"" + kind + "\" in config (DSL maps live on the real line)");
}

SamplerSpec parse_sampler(const json& j) {
  SamplerSpec s;
  if (!j.is_object() || !j.contains("kind")) bail("\"sampler\" needs a \"kind\"");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "grid") {
    s.kind = SamplerSpec::Kind::Grid;
    s.resolution = j.value("resolution", 201);
    if (s.resolution < 2) bail("sampler resolution must be >= 2");
  } else if (kind == "random") {
    s.kind = SamplerSpec::Kind::Random;
    s.count = j.value("count", 10000L);
    s.seed = j.value("seed", 0ULL);
    if (s.count < 1) bail("sampler count must be >= 1");
  } else {
    bail("unknown sampler kind \"" + kind + "\"");
  }
  return s;
}

}  // namespace

RunConfig load_config(const std::string& path, const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) bail("cannot open config file \"" + path + "\"");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    bail("malformed JSON in \"" + path + "\": " + e.what());
  }
  if (!j.is_object()) bail("config root must be a JSON object");

  RunConfig cfg;
  try {
    if (j.contains("space")) cfg.space = parse_space(j["space"]);
    if (cfg.space.kind() != MetricSpace::Kind::RealLine)
      bail("the CLI drives DSL-defined maps, which require a real-line space");
    if (!j.contains("domain")) bail("config needs a \"domain\"");
    cfg.domain = parse_domain(j["domain"]);
    if (cfg.domain.dim() != 1) bail("DSL maps need a 1-d domain box");

    if (!j.contains("T") || !j["T"].is_string()) bail("config needs a \"T\" map source string");
    cfg.t_source = j["T"].get<std::string>();
    cfg.t_def = parse_map_source(cfg.t_source, "T");
    cfg.s_source = j.value("S", std::string("same-as-T"));
    if (cfg.s_source == "same-as-T") {
      cfg.s_def = cfg.t_def;
    } else {
      cfg.s_def = parse_map_source(cfg.s_source, "S");
    }

    if (!j.contains("gauges") || !j["gauges"].is_object()) bail("config needs a \"gauges\" object");
    const auto& g = j["gauges"];
    if (!g.contains("f") || !g.contains("phi")) bail("\"gauges\" needs \"f\" and \"phi\"");
    cfg.gauges.f = gauge_from_json(g["f"]);
    cfg.gauges.phi = gauge_from_json(g["phi"]);
    cfg.gauges.psi = g.contains("psi") ? gauge_from_json(g["psi"]) : GaugeFn::zero();
    validate_triple(cfg.gauges);

    if (j.contains("sampler")) cfg.sampler = parse_sampler(j["sampler"]);
    cfg.certify_tol = j.value("tol", 1e-12);
    if (cfg.certify_tol < 0) bail("certify tol must be >= 0");
    cfg.violation_cap = j.value("violation_cap", 100);
    if (cfg.violation_cap < 0) bail("violation_cap must be >= 0");

    if (j.contains("solver")) {
      const auto& s = j["solver"];
      if (s.contains("x0")) {
        cfg.starts.clear();
        if (s["x0"].is_number()) {
          cfg.starts.push_back(s["x0"].get<double>());
        } else if (s["x0"].is_array() && !s["x0"].empty()) {
          for (const auto& v : s["x0"]) cfg.starts.push_back(v.get<double>());
        } else {
          bail("solver \"x0\" must be a number or a nonempty list");
        }
      }
      if (s.contains("strategy")) cfg.strategy.kind = strategy_from_name(s["strategy"].get<std::string>());
      cfg.strategy.seed = s.value("seed", 0ULL);
      cfg.solver_tol = s.value("tol", 1e-10);
      cfg.max_iter = s.value("max_iter", 100000);
      if (!(cfg.solver_tol > 0)) bail("solver tol must be > 0");
      if (cfg.max_iter < 1) bail("solver max_iter must be >= 1");
    }

    if (j.contains("out")) {
      const auto& o = j["out"];
      cfg.out_report = o.value("report", cfg.out_report);
      cfg.out_result = o.value("result", cfg.out_result);
      cfg.out_trace = o.value("trace", cfg.out_trace);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    bail("invalid config \"" + path + "\": " + e.what());
  }

  // flag > config > default
  if (overrides.tol) {
    cfg.certify_tol = *overrides.tol;
    cfg.solver_tol = *overrides.tol;
    if (!(cfg.solver_tol > 0)) bail("--tol must be > 0");
  }
  if (overrides.seed) {
    cfg.sampler.seed = *overrides.seed;
    cfg.strategy.seed = *overrides.seed;
  }
  if (overrides.max_iter) {
    cfg.max_iter = *overrides.max_iter;
    if (cfg.max_iter < 1) bail("--max-iter must be >= 1");
  }
  if (overrides.strategy) cfg.strategy.kind = strategy_from_name(*overrides.strategy);

  // domain coverage of the map guards, probed by sampling
  const auto [lo, hi] = cfg.domain.axes[0];
  if (const auto miss = dsl::first_uncovered(cfg.t_def, lo, hi, 1001))
    bail("T map guards do not cover the domain: no clause matches x = " + std::to_string(*miss));
  if (const auto miss = dsl::first_uncovered(cfg.s_def, lo, hi, 1001))
    bail("S map guards do not cover the domain: no clause matches x = " + std::to_string(*miss));

  return cfg;
}

MapPair make_pair(const RunConfig& cfg) {
  return MapPair{dsl::to_multimap(cfg.t_def), dsl::to_multimap(cfg.s_def), cfg.space};
}

}  // namespace cli
}  // namespace endcert
