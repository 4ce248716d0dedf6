#include "endcert/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace endcert {

namespace {

struct Functionals {
  double m;
  double n;
};

Functionals mn_terms(const MetricSpace& space, const BoundedSet& Tx, const BoundedSet& Sy, const Point& x,
                     const Point& y) {
  const BoundedSet sx = singleton(space, x);
  const BoundedSet sy = singleton(space, y);
  const double d_xy = dist(space, x, y);
  const double delta_Tx_x = sup_dist(space, Tx, sx);
  const double delta_y_Sy = sup_dist(space, sy, Sy);
  const double gap_y_Tx = gap(space, sy, Tx);
  const double gap_x_Sy = gap(space, sx, Sy);
  const double m = std::max({d_xy, delta_Tx_x, delta_y_Sy, 0.5 * (gap_y_Tx + gap_x_Sy)});
  const double n = std::min(gap_y_Tx, gap_x_Sy);
  return {m, n};
}

bool pair_lex_less(const Point& x1, const Point& y1, const Point& x2, const Point& y2) {
  if (lex_less(x1, x2)) return true;
  if (lex_less(x2, x1)) return false;
  return lex_less(y1, y2);
}

}  // namespace

double big_m(const MapPair& pair, const Point& x, const Point& y) {
  return mn_terms(pair.space, pair.T(x), pair.S(y), x, y).m;
}

double small_n(const MapPair& pair, const Point& x, const Point& y) {
  return mn_terms(pair.space, pair.T(x), pair.S(y), x, y).n;
}

ConditionResidual residual(const MapPair& pair, const GaugeTriple& gauges, const Point& x, const Point& y) {
  const BoundedSet Tx = pair.T(x);
  const BoundedSet Sy = pair.S(y);
  const auto [m, n] = mn_terms(pair.space, Tx, Sy, x, y);
  ConditionResidual r;
  r.x = x;
  r.y = y;
  r.m = m;
  r.n = n;
  r.lhs = gauges.f(sup_dist(pair.space, Tx, Sy));
  const double fm = gauges.f(m);
  r.rhs = fm - gauges.phi(fm) + gauges.psi(n);
  r.residual = r.rhs - r.lhs;
  return r;
}

std::vector<Point> sample_domain(const DomainBox& domain, const SamplerSpec& sampler) {
  if (domain.dim() < 1) throw std::invalid_argument("domain box must have at least one axis");
  for (const auto& ax : domain.axes)
    if (!(std::isfinite(ax[0]) && std::isfinite(ax[1]) && ax[0] <= ax[1]))
      throw std::invalid_argument("domain axis must be a finite interval");

  std::vector<Point> pts;
  if (sampler.kind == SamplerSpec::Kind::Grid) {
    if (sampler.resolution < 2) throw std::invalid_argument("grid resolution must be >= 2");
    const int r = sampler.resolution;
    const int d = domain.dim();
    // lexicographic enumeration of the product grid, last axis fastest
    std::vector<int> idx(d, 0);
    const long total = static_cast<long>(std::pow(static_cast<double>(r), d));
    pts.reserve(total);
    while (true) {
      Eigen::VectorXd c(d);
      for (int a = 0; a < d; ++a) {
        const auto& ax = domain.axes[a];
        const double t = static_cast<double>(idx[a]) / (r - 1);
        c[a] = ax[0] + (ax[1] - ax[0]) * t;
      }
      pts.push_back(Point(std::move(c)));
      int a = d - 1;
      while (a >= 0 && ++idx[a] == r) idx[a--] = 0;
      if (a < 0) break;
    }
    return pts;
  }
  if (sampler.count < 1) throw std::invalid_argument("random sampler needs count >= 1");
  std::mt19937_64 rng(sampler.seed);
  pts.reserve(sampler.count);
  for (long i = 0; i < sampler.count; ++i) {
    Eigen::VectorXd c(domain.dim());
    for (int a = 0; a < domain.dim(); ++a) {
      const auto& ax = domain.axes[a];
      c[a] = std::clamp(ax[0] + uniform01(rng) * (ax[1] - ax[0]), ax[0], ax[1]);
    }
    pts.push_back(Point(std::move(c)));
  }
  return pts;
}

CertificationReport certify_pairs(const MapPair& pair, const GaugeTriple& gauges,
                                  const std::vector<std::pair<Point, Point>>& samples, double tol,
                                  int violation_cap) {
  if (tol < 0) throw std::invalid_argument("tol must be >= 0");
  CertificationReport rep;
  rep.tol = tol;
  rep.violation_cap = violation_cap;
  rep.n_points = static_cast<long>(samples.size());
  for (const auto& [x, y] : samples) {
    ConditionResidual r;
    try {
      r = residual(pair, gauges, x, y);
    } catch (const std::exception& e) {
      throw std::runtime_error("map evaluation failed at sampled pair: " + std::string(e.what()));
    }
    if (!rep.has_min || r.residual < rep.min_residual ||
        (r.residual == rep.min_residual && pair_lex_less(r.x, r.y, rep.arg_x, rep.arg_y))) {
      rep.has_min = true;
      rep.min_residual = r.residual;
      rep.arg_x = r.x;
      rep.arg_y = r.y;
    }
    if (r.residual < -tol) {
      ++rep.n_violations;
      rep.violations.push_back(std::move(r));
    }
  }
  std::sort(rep.violations.begin(), rep.violations.end(), [](const ConditionResidual& a, const ConditionResidual& b) {
    return pair_lex_less(a.x, a.y, b.x, b.y);
  });
  if (static_cast<int>(rep.violations.size()) > violation_cap) rep.violations.resize(violation_cap);
  rep.certified = rep.n_violations == 0;
  return rep;
}

CertificationReport certify(const MapPair& pair, const GaugeTriple& gauges, const DomainBox& domain,
                            const SamplerSpec& sampler, double tol, int violation_cap) {
  std::vector<std::pair<Point, Point>> samples;
  if (sampler.kind == SamplerSpec::Kind::Grid) {
    const auto pts = sample_domain(domain, sampler);
    samples.reserve(pts.size() * pts.size());
    for (const auto& x : pts)
      for (const auto& y : pts) samples.emplace_back(x, y);
  } else {
    SamplerSpec xs = sampler;
    xs.seed = sampler.seed;
    SamplerSpec ys = sampler;
    ys.seed = sampler.seed + 0x9e3779b97f4a7c15ULL;
    const auto px = sample_domain(domain, xs);
    const auto py = sample_domain(domain, ys);
    samples.reserve(px.size());
    for (std::size_t i = 0; i < px.size(); ++i) samples.emplace_back(px[i], py[i]);
  }
  CertificationReport rep = certify_pairs(pair, gauges, samples, tol, violation_cap);
  rep.domain = domain;
  rep.sampler = sampler;
  return rep;
}

CertificationReport merge_reports(const CertificationReport& a, const CertificationReport& b) {
  if (a.tol != b.tol || a.violation_cap != b.violation_cap)
    throw std::invalid_argument("cannot merge reports with different tol or cap");
  CertificationReport out;
  out.domain = a.domain.dim() > 0 ? a.domain : b.domain;
  out.sampler = a.sampler;
  out.tol = a.tol;
  out.violation_cap = a.violation_cap;
  out.n_points = a.n_points + b.n_points;
  out.n_violations = a.n_violations + b.n_violations;
  if (a.has_min && b.has_min) {
    const bool take_a = a.min_residual < b.min_residual ||
                        (a.min_residual == b.min_residual && pair_lex_less(a.arg_x, a.arg_y, b.arg_x, b.arg_y));
    const CertificationReport& best = take_a ? a : b;
    out.has_min = true;
    out.min_residual = best.min_residual;
    out.arg_x = best.arg_x;
    out.arg_y = best.arg_y;
  } else if (a.has_min || b.has_min) {
    const CertificationReport& best = a.has_min ? a : b;
    out.has_min = true;
    out.min_residual = best.min_residual;
    out.arg_x = best.arg_x;
    out.arg_y = best.arg_y;
  }
  std::merge(a.violations.begin(), a.violations.end(), b.violations.begin(), b.violations.end(),
             std::back_inserter(out.violations),
             [](const ConditionResidual& u, const ConditionResidual& v) {
               return pair_lex_less(u.x, u.y, v.x, v.y);
             });
  if (static_cast<int>(out.violations.size()) > out.violation_cap) out.violations.resize(out.violation_cap);
  out.certified = out.n_violations == 0;
  return out;
}

namespace {

nlohmann::json point_to_json(const Point& p) {
  if (p.dim() == 1) return p.coords[0];
  auto arr = nlohmann::json::array();
  for (int i = 0; i < p.dim(); ++i) arr.push_back(p.coords[i]);
  return arr;
}

}  // namespace

nlohmann::json report_to_json(const CertificationReport& report) {
  nlohmann::json j;
  j["verdict"] = report.certified ? "certified" : "violated";
  j["min_residual"] = report.min_residual;
  j["argmin"] = {point_to_json(report.arg_x), point_to_json(report.arg_y)};
  j["n_points"] = report.n_points;
  j["n_violations"] = report.n_violations;
  j["violation_cap"] = report.violation_cap;
  j["tol"] = report.tol;
  auto dom = nlohmann::json::array();
  for (const auto& ax : report.domain.axes) dom.push_back({ax[0], ax[1]});
  j["domain"] = dom;
  if (report.sampler.kind == SamplerSpec::Kind::Grid) {
    j["sampler"] = {{"kind", "grid"}, {"resolution", report.sampler.resolution}};
  } else {
    j["sampler"] = {{"kind", "random"}, {"count", report.sampler.count}, {"seed", report.sampler.seed}};
  }
  auto viols = nlohmann::json::array();
  for (const auto& v : report.violations) {
    viols.push_back({{"x", point_to_json(v.x)},
                     {"y", point_to_json(v.y)},
                     {"lhs", v.lhs},
                     {"rhs", v.rhs},
                     {"m", v.m},
                     {"n", v.n},
                     {"residual", v.residual}});
  }
  j["violations"] = viols;
  return j;
}

}  // namespace endcert
