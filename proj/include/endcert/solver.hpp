#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include <json.hpp>

#include "endcert/contraction.hpp"

namespace endcert {

/// How the next iterate is picked from the current image set. The
/// underlying convergence argument allows any selection, so this is a
/// first-class parameter.
struct SelectionStrategy {
  enum class Kind {
    Nearest,      // member closest to the current iterate (intervals: clamp)
    Midpoint,     // interval midpoint; medoid for finite sets
    SupEndpoint,  // greatest member: interval upper endpoint, lexicographic max
    Random,       // uniform member, seeded
  };
  Kind kind = Kind::Nearest;
  std::uint64_t seed = 0;
};

/// Orbit of the alternating iteration x_{n+1} in A_n, where A_n is
/// T(x_n) for even n and S(x_n) for odd n. Gap recording starts at
/// delta(A_0, A_1).
struct IterationTrace {
  std::vector<Point> iterates;
  std::vector<BoundedSet> sets;    // A_0, A_1, ...
  std::vector<double> set_gaps;    // delta(A_n, A_{n+1})
  std::vector<double> step_dists;  // d(x_n, x_{n+1})
  bool converged = false;
  Point final;
  int iterations_used = 0;  // number of recorded gaps
};

/// Runs the alternating iteration until both delta(A_n,A_{n+1}) <= tol
/// and d(x_n,x_{n+1}) <= tol, or max_iter gaps have been recorded.
/// Non-convergence is reported in the trace, not thrown.
IterationTrace iterate(const MapPair& pair, const Point& x0, const SelectionStrategy& strategy, double tol,
                       int max_iter);

struct EndpointResult {
  Point z;
  double delta_T = 0;  // delta(Tz, z)
  double delta_S = 0;  // delta(Sz, z)
  bool is_endpoint = false;
  double tol = 0;
  std::optional<IterationTrace> trace;
};

/// z is a common end point iff Tz = Sz = {z}; checked as
/// max(delta(Tz,z), delta(Sz,z)) <= tol.
EndpointResult verify_endpoint(const MapPair& pair, const Point& z, double tol);

/// iterate + verify_endpoint on the final iterate.
EndpointResult solve(const MapPair& pair, const GaugeTriple& gauges, const Point& x0,
                     const SelectionStrategy& strategy, double tol, int max_iter);

struct MonotoneCheck {
  bool monotone = true;
  long first_violation = -1;  // index into set_gaps
};

/// True iff set_gaps is non-increasing within the given slack.
MonotoneCheck check_monotone(const IterationTrace& trace, double slack = 1e-12);

/// A-posteriori tail estimate ((1-k)/k) * f(last recorded gap), valid
/// when the contraction hypothesis holds with ratio parameter k.
/// Diagnostic only; compare f(candidate error) against it.
double tail_bound(const IterationTrace& trace, double k, const GaugeFn& f);

struct MultistartResult {
  std::vector<EndpointResult> runs;   // one per start, in input order
  std::vector<Point> endpoints;       // deduplicated cluster representatives
  std::vector<Point> failed_starts;   // non-convergent, excluded from clustering
  bool unique = false;
};

/// Runs solve from every start and clusters the converged end points
/// within 10*tol. Evidence, not proof, of uniqueness.
MultistartResult multistart_uniqueness_probe(const MapPair& pair, const GaugeTriple& gauges,
                                             const std::vector<Point>& starts, const SelectionStrategy& strategy,
                                             double tol, int max_iter);

/// Lifts a point map g to the singleton-valued map x -> {g(x)}; end
/// points of the lift are exactly the fixed points of g.
MultiMap lift_single_valued(std::function<Point(const Point&)> g);

/// CSV export, one row per iterate:
/// step,x,set_lo,set_hi,delta_gap,step_dist
/// set bounds are empty for finite-set images and for the last row;
/// delta_gap and step_dist are empty where not yet defined.
void write_trace_csv(std::ostream& os, const IterationTrace& trace);

nlohmann::json endpoint_result_to_json(const EndpointResult& r);
nlohmann::json multistart_result_to_json(const MultistartResult& r, const std::vector<Point>& starts);

SelectionStrategy::Kind strategy_from_name(const std::string& name);
std::string strategy_name(SelectionStrategy::Kind kind);

}  // namespace endcert
