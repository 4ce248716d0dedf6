#include "endcert/gauge.hpp"

#include "endcert/metric.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace endcert {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

GaugeFn GaugeFn::linear(double k) {
  require(std::isfinite(k) && k > 0, "linear gauge needs k > 0");
  return GaugeFn(Kind::Linear, k);
}

GaugeFn GaugeFn::log1p() { return GaugeFn(Kind::Log1p, 0); }

GaugeFn GaugeFn::power(double p) {
  require(std::isfinite(p) && p > 0, "power gauge needs p > 0");
  return GaugeFn(Kind::Power, p);
}

GaugeFn GaugeFn::quad_scale(double c) {
  require(std::isfinite(c) && c > 0, "quad-scale gauge needs c > 0");
  return GaugeFn(Kind::QuadScale, c);
}

GaugeFn GaugeFn::identity() { return GaugeFn(Kind::Identity, 0); }

GaugeFn GaugeFn::zero() { return GaugeFn(Kind::Zero, 0); }

GaugeFn GaugeFn::table(std::vector<double> ts, std::vector<double> vs) {
  require(ts.size() == vs.size() && ts.size() >= 2, "table gauge needs >= 2 samples");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    require(std::isfinite(ts[i]) && ts[i] >= 0, "table abscissae must be finite and nonnegative");
    require(std::isfinite(vs[i]) && vs[i] >= 0, "table values must be finite and nonnegative");
    if (i > 0) require(ts[i] > ts[i - 1], "table abscissae must be strictly increasing");
  }
  GaugeFn g(Kind::Table, 0);
  g.ts_ = std::move(ts);
  g.vs_ = std::move(vs);
  return g;
}

double GaugeFn::operator()(double t) const {
  require(std::isfinite(t) && t >= 0, "gauge argument must be finite and nonnegative");
  switch (kind_) {
    case Kind::Linear:
      return param_ * t;
    case Kind::Log1p:
      return std::log1p(t);
    case Kind::Power:
      return std::pow(t, param_);
    case Kind::QuadScale:
      return param_ * t * t;
    case Kind::Identity:
      return t;
    case Kind::Zero:
      return 0.0;
    case Kind::Table: {
      if (t <= ts_.front()) {
        // extend linearly through the origin below the first sample
        return ts_.front() == 0 ? vs_.front() : vs_.front() * (t / ts_.front());
      }
      if (t >= ts_.back()) return vs_.back();
      const auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
      const auto i = static_cast<std::size_t>(it - ts_.begin());
      const double w = (t - ts_[i - 1]) / (ts_[i] - ts_[i - 1]);
      return vs_[i - 1] + w * (vs_[i] - vs_[i - 1]);
    }
  }
  throw std::logic_error("unreachable");
}

GaugeFn::Membership GaugeFn::member_of(GaugeClass c) const {
  using M = Membership;
  switch (kind_) {
    case Kind::Linear:
    case Kind::Identity:
    case Kind::Log1p:
      return M::Yes;
    case Kind::Power:
      if (c == GaugeClass::Psi) return M::Yes;
      return param_ <= 1.0 ? M::Yes : M::No;  // t^p with p>1 fails the ratio and subadditivity conditions
    case Kind::QuadScale:
      return c == GaugeClass::Psi ? M::Yes : M::No;
    case Kind::Zero:
      return M::No;
    case Kind::Table:
      return M::Unknown;
  }
  return M::Unknown;
}

std::string GaugeFn::describe() const {
  switch (kind_) {
    case Kind::Linear:
      return "linear(" + fmt(param_) + ")";
    case Kind::Log1p:
      return "log1p";
    case Kind::Power:
      return "power(" + fmt(param_) + ")";
    case Kind::QuadScale:
      return "quad-scale(" + fmt(param_) + ")";
    case Kind::Identity:
      return "identity";
    case Kind::Zero:
      return "zero";
    case Kind::Table:
      return "table[" + std::to_string(ts_.size()) + "]";
  }
  return "?";
}

namespace {

std::vector<double> log_grid(const ProbeConfig& p) {
  std::vector<double> g;
  g.reserve(p.grid_points);
  const double llo = std::log10(p.grid_lo), lhi = std::log10(p.grid_hi);
  for (int i = 0; i < p.grid_points; ++i) {
    const double e = llo + (lhi - llo) * i / (p.grid_points - 1);
    g.push_back(std::pow(10.0, e));
  }
  return g;
}

ClassReport fail(GaugeClass c, const std::string& cond, std::vector<double> witness, std::string detail) {
  ClassReport r;
  r.cls = c;
  r.pass = false;
  r.failed_condition = cond;
  r.witness = std::move(witness);
  r.detail = std::move(detail);
  return r;
}

// zero exactly at zero, positive on the probe grid
bool check_zero_at_zero_only(const GaugeFn& g, const std::vector<double>& grid, GaugeClass c, ClassReport& out) {
  if (g(0.0) != 0.0) {
    out = fail(c, "(i)", {0.0}, "g(0) = " + fmt(g(0.0)) + " != 0");
    return false;
  }
  for (double t : grid) {
    if (g(t) <= 0.0) {
      out = fail(c, "(i)", {t}, "g(" + fmt(t) + ") = " + fmt(g(t)) + " is not positive");
      return false;
    }
  }
  return true;
}

bool check_nondecreasing(const GaugeFn& g, const std::vector<double>& grid, GaugeClass c, const ProbeConfig& p,
                         ClassReport& out, const std::string& label) {
  double prev_t = 0.0, prev_v = g(0.0);
  for (double t : grid) {
    const double v = g(t);
    if (v < prev_v - p.tol) {
      out = fail(c, label, {prev_t, t},
                 "g(" + fmt(prev_t) + ") = " + fmt(prev_v) + " > g(" + fmt(t) + ") = " + fmt(v));
      return false;
    }
    prev_t = t;
    prev_v = v;
  }
  return true;
}

// jump detection at a shrinking scale; a coarse stand-in for continuity
bool check_continuity(const GaugeFn& g, const std::vector<double>& grid, GaugeClass c, ClassReport& out,
                      const std::string& label) {
  for (double t : grid) {
    const double h = std::max(t * 1e-9, 1e-12);
    const double osc = std::max(std::abs(g(t + h) - g(t)), t - h >= 0 ? std::abs(g(t) - g(t - h)) : 0.0);
    if (osc > 1e-3 * (1.0 + std::abs(g(t)))) {
      out = fail(c, label, {t}, "oscillation " + fmt(osc) + " at scale " + fmt(h) + " near t = " + fmt(t));
      return false;
    }
  }
  return true;
}

// lower semicontinuity: value must not exceed the sampled neighborhood
// minimum by more than a shrinking-scale jump allowance
bool check_lsc(const GaugeFn& g, const std::vector<double>& grid, ClassReport& out) {
  for (std::size_t i = 0; i < grid.size(); i += 4) {
    const double t = grid[i];
    const double h = std::max(t * 1e-6, 1e-12);
    double nbhd_min = std::numeric_limits<double>::infinity();
    for (int j = -8; j <= 8; ++j) {
      const double u = t + h * j / 8.0;
      if (u >= 0) nbhd_min = std::min(nbhd_min, g(u));
    }
    if (g(t) > nbhd_min + 1e-3 * (1.0 + std::abs(g(t)))) {
      out = fail(GaugeClass::Phi, "(ii)", {t},
                 "g(" + fmt(t) + ") = " + fmt(g(t)) + " exceeds neighborhood min " + fmt(nbhd_min));
      return false;
    }
  }
  return true;
}

}  // namespace

ClassReport check_phi(const GaugeFn& g, const ProbeConfig& probe) {
  const auto grid = log_grid(probe);
  ClassReport r;
  r.cls = GaugeClass::Phi;
  if (!check_zero_at_zero_only(g, grid, GaugeClass::Phi, r)) return r;
  if (!check_lsc(g, grid, r)) return r;
  // (iii): liminf of g(t)/t along the canonical vanishing sequence
  // t = 2^-j must stay away from 0. Single-sequence approximation.
  double min_ratio = std::numeric_limits<double>::infinity();
  double argmin_t = 1.0;
  for (int j = 0; j <= probe.ratio_scales; ++j) {
    const double t = std::ldexp(1.0, -j);
    const double ratio = g(t) / t;
    if (ratio < min_ratio) {
      min_ratio = ratio;
      argmin_t = t;
    }
  }
  if (!(min_ratio >= probe.ratio_floor)) {
    r = fail(GaugeClass::Phi, "(iii)", {argmin_t},
             "empirical inf of g(t)/t along t = 2^-j is " + fmt(min_ratio) + ", below floor " +
                 fmt(probe.ratio_floor) + "; no k in (0,1) with g(t) >= k t is evident");
    r.best_k = min_ratio;
    return r;
  }
  r.pass = true;
  r.best_k = std::min(min_ratio, 1.0 - 1e-9);
  r.warning = !g.trusted();
  r.detail = "empirical ratio bound k = " + fmt(r.best_k) + " from the canonical sequence t = 2^-j";
  return r;
}

ClassReport check_omega(const GaugeFn& g, const ProbeConfig& probe) {
  const auto grid = log_grid(probe);
  ClassReport r;
  r.cls = GaugeClass::Omega;
  if (!check_zero_at_zero_only(g, grid, GaugeClass::Omega, r)) return r;
  if (!check_nondecreasing(g, grid, GaugeClass::Omega, probe, r, "(ii)")) return r;
  if (!check_continuity(g, grid, GaugeClass::Omega, r, "(iii)")) return r;
  // (iv) subadditivity over canonical and sampled pairs
  std::vector<std::pair<double, double>> pairs = {{1.0, 1.0}, {1.0, 2.0}, {2.0, 1.0}, {0.5, 0.5}};
  for (std::size_t i = 0; i < grid.size(); i += 4)
    for (std::size_t j = 0; j < grid.size(); j += 4) pairs.emplace_back(grid[i], grid[j]);
  std::mt19937_64 rng(probe.seed);
  for (int i = 0; i < 256; ++i)
    pairs.emplace_back(uniform01(rng) * probe.grid_hi, uniform01(rng) * probe.grid_hi);
  for (const auto& [x, y] : pairs) {
    const double lhs = g(x + y), rhs = g(x) + g(y);
    if (lhs > rhs + probe.tol * (1.0 + std::abs(rhs))) {
      return fail(GaugeClass::Omega, "(iv)", {x, y},
                  "f(" + fmt(x + y) + ") = " + fmt(lhs) + " > f(x)+f(y) = " + fmt(rhs));
    }
  }
  r.pass = true;
  r.warning = !g.trusted();
  return r;
}

ClassReport check_psi(const GaugeFn& g, const ProbeConfig& probe) {
  const auto grid = log_grid(probe);
  ClassReport r;
  r.cls = GaugeClass::Psi;
  if (!check_zero_at_zero_only(g, grid, GaugeClass::Psi, r)) return r;
  if (!check_nondecreasing(g, grid, GaugeClass::Psi, probe, r, "(ii)")) return r;
  if (!check_continuity(g, grid, GaugeClass::Psi, r, "(iii)")) return r;
  r.pass = true;
  r.warning = !g.trusted();
  return r;
}

ClassReport check_class(const GaugeFn& g, GaugeClass c, const ProbeConfig& probe) {
  switch (c) {
    case GaugeClass::Phi:
      return check_phi(g, probe);
    case GaugeClass::Omega:
      return check_omega(g, probe);
    case GaugeClass::Psi:
      return check_psi(g, probe);
  }
  throw std::logic_error("unreachable");
}

GaugeTriple preset_banach_like(double k, GaugeFn psi) {
  require(k > 0 && k < 1, "preset_banach_like needs k in (0,1)");
  return GaugeTriple{GaugeFn::identity(), GaugeFn::linear(1.0 - k), std::move(psi)};
}

void validate_triple(const GaugeTriple& t, const ProbeConfig& probe) {
  const auto ensure = [&](const GaugeFn& g, GaugeClass c, const char* slot) {
    if (g.member_of(c) == GaugeFn::Membership::Yes) return;
    const auto rep = check_class(g, c, probe);
    if (!rep.pass)
      throw std::invalid_argument(std::string(slot) + " gauge " + g.describe() + " fails class " + class_name(c) +
                                  " condition " + rep.failed_condition + ": " + rep.detail);
  };
  ensure(t.f, GaugeClass::Omega, "f");
  ensure(t.phi, GaugeClass::Phi, "phi");
  if (!t.psi.is_zero()) ensure(t.psi, GaugeClass::Psi, "psi");
}

std::string class_name(GaugeClass c) {
  switch (c) {
    case GaugeClass::Phi:
      return "phi";
    case GaugeClass::Omega:
      return "omega";
    case GaugeClass::Psi:
      return "psi";
  }
  return "?";
}

GaugeFn gauge_from_json(const nlohmann::json& j) {
  require(j.is_object() && j.contains("kind") && j["kind"].is_string(), "gauge spec must be an object with a \"kind\"");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "linear") {
    require(j.contains("k"), "linear gauge needs \"k\"");
    return GaugeFn::linear(j["k"].get<double>());
  }
  if (kind == "log1p") return GaugeFn::log1p();
  if (kind == "power") {
    require(j.contains("p"), "power gauge needs \"p\"");
    return GaugeFn::power(j["p"].get<double>());
  }
  if (kind == "quad-scale") {
    require(j.contains("c"), "quad-scale gauge needs \"c\"");
    return GaugeFn::quad_scale(j["c"].get<double>());
  }
  if (kind == "identity") return GaugeFn::identity();
  if (kind == "zero") return GaugeFn::zero();
  if (kind == "table") {
    require(j.contains("points") && j["points"].is_array(), "table gauge needs \"points\": [[t,v],...]");
    std::vector<double> ts, vs;
    for (const auto& p : j["points"]) {
      require(p.is_array() && p.size() == 2, "table gauge points must be [t,v] pairs");
      ts.push_back(p[0].get<double>());
      vs.push_back(p[1].get<double>());
    }
    return GaugeFn::table(std::move(ts), std::move(vs));
  }
  throw std::invalid_argument("unknown gauge kind \"" + kind + "\"");
}

nlohmann::json gauge_to_json(const GaugeFn& g) {
  nlohmann::json j;
  switch (g.kind()) {
    case GaugeFn::Kind::Linear:
      j["kind"] = "linear";
      j["k"] = g.param();
      break;
    case GaugeFn::Kind::Log1p:
      j["kind"] = "log1p";
      break;
    case GaugeFn::Kind::Power:
      j["kind"] = "power";
      j["p"] = g.param();
      break;
    case GaugeFn::Kind::QuadScale:
      j["kind"] = "quad-scale";
      j["c"] = g.param();
      break;
    case GaugeFn::Kind::Identity:
      j["kind"] = "identity";
      break;
    case GaugeFn::Kind::Zero:
      j["kind"] = "zero";
      break;
    case GaugeFn::Kind::Table: {
      j["kind"] = "table";
      auto pts = nlohmann::json::array();
      for (std::size_t i = 0; i < g.table_ts().size(); ++i)
        pts.push_back({g.table_ts()[i], g.table_vs()[i]});
      j["points"] = pts;
      break;
    }
  }
  return j;
}

nlohmann::json class_report_to_json(const ClassReport& r) {
  nlohmann::json j;
  j["class"] = class_name(r.cls);
  j["verdict"] = r.pass ? "pass" : "fail";
  j["warning"] = r.warning;
  if (!r.pass) {
    j["failed_condition"] = r.failed_condition;
    j["witness"] = r.witness;
  }
  if (r.cls == GaugeClass::Phi && r.pass) j["k"] = r.best_k;
  if (!r.detail.empty()) j["detail"] = r.detail;
  return j;
}

}  // namespace endcert
