#include "endcert/solver.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

namespace endcert {

namespace {

Point select_from(const MetricSpace& space, const BoundedSet& set, const Point& current,
                  SelectionStrategy::Kind kind, std::mt19937_64& rng) {
  if (set.is_interval()) {
    const double lo = set.lo(), hi = set.hi();
    switch (kind) {
      case SelectionStrategy::Kind::Nearest:
        return Point(std::clamp(current.scalar(), lo, hi));
      case SelectionStrategy::Kind::Midpoint:
        return Point(0.5 * (lo + hi));
      case SelectionStrategy::Kind::SupEndpoint:
        return Point(hi);
      case SelectionStrategy::Kind::Random:
        return Point(std::clamp(lo + uniform01(rng) * (hi - lo), lo, hi));
    }
  }
  const auto& pts = set.points();
  switch (kind) {
    case SelectionStrategy::Kind::Nearest: {
      std::size_t best = 0;
      double best_d = dist(space, current, pts[0]);
      for (std::size_t i = 1; i < pts.size(); ++i) {
        const double d = dist(space, current, pts[i]);
        if (d < best_d) {
          best = i;
          best_d = d;
        }
      }
      return pts[best];
    }
    case SelectionStrategy::Kind::Midpoint: {
      // medoid: member with the least total distance to the others
      std::size_t best = 0;
      double best_sum = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < pts.size(); ++i) {
        double sum = 0;
        for (std::size_t j = 0; j < pts.size(); ++j) sum += dist(space, pts[i], pts[j]);
        if (sum < best_sum) {
          best = i;
          best_sum = sum;
        }
      }
      return pts[best];
    }
    case SelectionStrategy::Kind::SupEndpoint: {
      std::size_t best = 0;
      for (std::size_t i = 1; i < pts.size(); ++i)
        if (lex_less(pts[best], pts[i])) best = i;
      return pts[best];
    }
    case SelectionStrategy::Kind::Random:
      return pts[uniform_index(rng, pts.size())];
  }
  throw std::logic_error("unreachable");
}

BoundedSet apply_map(const MapPair& pair, int step, const Point& x) {
  try {
    return step % 2 == 0 ? pair.T(x) : pair.S(x);
  } catch (const std::exception& e) {
    throw std::runtime_error("map evaluation failed at step " + std::to_string(step) + ": " + e.what());
  }
}

}  // namespace

IterationTrace iterate(const MapPair& pair, const Point& x0, const SelectionStrategy& strategy, double tol,
                       int max_iter) {
  if (!(tol > 0)) throw std::invalid_argument("tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  std::mt19937_64 rng(strategy.seed);

  IterationTrace trace;
  trace.iterates.push_back(x0);
  trace.sets.push_back(apply_map(pair, 0, x0));  // A_0 = T(x_0)
  Point current = select_from(pair.space, trace.sets.back(), x0, strategy.kind, rng);
  trace.iterates.push_back(current);
  trace.step_dists.push_back(dist(pair.space, x0, current));

  for (int n = 1; n <= max_iter; ++n) {
    const BoundedSet a_cur = apply_map(pair, n, current);  // A_n
    trace.set_gaps.push_back(sup_dist(pair.space, trace.sets.back(), a_cur));
    trace.sets.push_back(a_cur);
    const Point next = select_from(pair.space, a_cur, current, strategy.kind, rng);
    trace.step_dists.push_back(dist(pair.space, current, next));
    trace.iterates.push_back(next);
    current = next;
    if (trace.set_gaps.back() <= tol && trace.step_dists.back() <= tol) {
      trace.converged = true;
      break;
    }
  }
  trace.iterations_used = static_cast<int>(trace.set_gaps.size());
  trace.final = trace.iterates.back();
  return trace;
}

EndpointResult verify_endpoint(const MapPair& pair, const Point& z, double tol) {
  const BoundedSet sz = singleton(pair.space, z);
  EndpointResult r;
  r.z = z;
  r.tol = tol;
  r.delta_T = sup_dist(pair.space, pair.T(z), sz);
  r.delta_S = sup_dist(pair.space, pair.S(z), sz);
  r.is_endpoint = std::max(r.delta_T, r.delta_S) <= tol;
  return r;
}

EndpointResult solve(const MapPair& pair, const GaugeTriple& gauges, const Point& x0,
                     const SelectionStrategy& strategy, double tol, int max_iter) {
  (void)gauges;  // the iteration itself is gauge-free; gauges matter to certification
  IterationTrace trace = iterate(pair, x0, strategy, tol, max_iter);
  EndpointResult r = verify_endpoint(pair, trace.final, tol);
  r.trace = std::move(trace);
  return r;
}

MonotoneCheck check_monotone(const IterationTrace& trace, double slack) {
  if (trace.iterates.empty()) throw std::invalid_argument("check_monotone needs a nonempty trace");
  MonotoneCheck c;
  for (std::size_t i = 1; i < trace.set_gaps.size(); ++i) {
    if (trace.set_gaps[i] > trace.set_gaps[i - 1] + slack) {
      c.monotone = false;
      c.first_violation = static_cast<long>(i);
      return c;
    }
  }
  return c;
}

double tail_bound(const IterationTrace& trace, double k, const GaugeFn& f) {
  if (!(k > 0 && k < 1)) throw std::invalid_argument("tail_bound needs k in (0,1)");
  if (trace.set_gaps.size() < 2) throw std::invalid_argument("tail_bound needs >= 2 recorded gaps");
  return (1.0 - k) / k * f(trace.set_gaps.back());
}

MultistartResult multistart_uniqueness_probe(const MapPair& pair, const GaugeTriple& gauges,
                                             const std::vector<Point>& starts, const SelectionStrategy& strategy,
                                             double tol, int max_iter) {
  if (starts.empty()) throw std::invalid_argument("multistart needs at least one start");
  MultistartResult out;
  std::vector<Point> candidates;
  for (const auto& x0 : starts) {
    EndpointResult r = solve(pair, gauges, x0, strategy, tol, max_iter);
    if (r.trace->converged) {
      candidates.push_back(r.z);
    } else {
      out.failed_starts.push_back(x0);
    }
    out.runs.push_back(std::move(r));
  }
  std::sort(candidates.begin(), candidates.end(), lex_less);
  const double cluster_tol = 10.0 * tol;
  for (const auto& z : candidates) {
    bool found = false;
    for (const auto& rep : out.endpoints) {
      if (dist(pair.space, z, rep) <= cluster_tol) {
        found = true;
        break;
      }
    }
    if (!found) out.endpoints.push_back(z);
  }
  out.unique = out.endpoints.size() == 1;
  return out;
}

MultiMap lift_single_valued(std::function<Point(const Point&)> g) {
  return [g = std::move(g)](const Point& x) { return BoundedSet::points({g(x)}); };
}

namespace {

void write_number(std::ostream& os, double v) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  os.write(buf, p - buf);
  (void)ec;
}

void write_point(std::ostream& os, const Point& p) {
  if (p.dim() == 1) {
    write_number(os, p.coords[0]);
    return;
  }
  os << '"';
  for (int i = 0; i < p.dim(); ++i) {
    if (i) os << ';';
    write_number(os, p.coords[i]);
  }
  os << '"';
}

nlohmann::json point_json(const Point& p) {
  if (p.dim() == 1) return p.coords[0];
  auto arr = nlohmann::json::array();
  for (int i = 0; i < p.dim(); ++i) arr.push_back(p.coords[i]);
  return arr;
}

}  // namespace

void write_trace_csv(std::ostream& os, const IterationTrace& trace) {
  os << "step,x,set_lo,set_hi,delta_gap,step_dist\n";
  for (std::size_t n = 0; n < trace.iterates.size(); ++n) {
    os << n << ',';
    write_point(os, trace.iterates[n]);
    os << ',';
    if (n < trace.sets.size() && trace.sets[n].is_interval()) {
      write_number(os, trace.sets[n].lo());
      os << ',';
      write_number(os, trace.sets[n].hi());
    } else {
      os << ',';
    }
    os << ',';
    if (n >= 1 && n - 1 < trace.set_gaps.size()) write_number(os, trace.set_gaps[n - 1]);
    os << ',';
    if (n >= 1 && n - 1 < trace.step_dists.size()) write_number(os, trace.step_dists[n - 1]);
    os << '\n';
  }
}

nlohmann::json endpoint_result_to_json(const EndpointResult& r) {
  nlohmann::json j;
  j["endpoint"] = point_json(r.z);
  j["delta_T"] = r.delta_T;
  j["delta_S"] = r.delta_S;
  j["is_endpoint"] = r.is_endpoint;
  j["tol"] = r.tol;
  if (r.trace) {
    j["converged"] = r.trace->converged;
    j["iterations"] = r.trace->iterations_used;
    j["start"] = point_json(r.trace->iterates.front());
  }
  return j;
}

nlohmann::json multistart_result_to_json(const MultistartResult& r, const std::vector<Point>& starts) {
  nlohmann::json j;
  auto runs = nlohmann::json::array();
  for (const auto& run : r.runs) runs.push_back(endpoint_result_to_json(run));
  j["runs"] = runs;
  auto eps = nlohmann::json::array();
  for (const auto& z : r.endpoints) eps.push_back(point_json(z));
  j["endpoints"] = eps;
  auto fails = nlohmann::json::array();
  for (const auto& s : r.failed_starts) fails.push_back(point_json(s));
  j["failed_starts"] = fails;
  j["unique"] = r.unique;
  auto st = nlohmann::json::array();
  for (const auto& s : starts) st.push_back(point_json(s));
  j["starts"] = st;
  return j;
}

SelectionStrategy::Kind strategy_from_name(const std::string& name) {
  if (name == "nearest") return SelectionStrategy::Kind::Nearest;
  if (name == "midpoint") return SelectionStrategy::Kind::Midpoint;
  if (name == "sup-endpoint") return SelectionStrategy::Kind::SupEndpoint;
  if (name == "random") return SelectionStrategy::Kind::Random;
  throw std::invalid_argument("unknown selection strategy \"" + name + "\"");
}

std::string strategy_name(SelectionStrategy::Kind kind) {
  switch (kind) {
    case SelectionStrategy::Kind::Nearest:
      return "nearest";
    case SelectionStrategy::Kind::Midpoint:
      return "midpoint";
    case SelectionStrategy::Kind::SupEndpoint:
      return "sup-endpoint";
    case SelectionStrategy::Kind::Random:
      return "random";
  }
  return "?";
}

}  // namespace endcert
