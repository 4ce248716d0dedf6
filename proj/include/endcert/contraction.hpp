#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include <json.hpp>

#include "endcert/gauge.hpp"
#include "endcert/metric.hpp"

namespace endcert {

/// Set-valued map E -> B(E). Evaluation may throw; certify and the
/// solver surface the offending point.
using MultiMap = std::function<BoundedSet(const Point&)>;

struct MapPair {
  MultiMap T;
  MultiMap S;
  MetricSpace space;
};

/// M(x,y) = max{ d(x,y), delta(Tx,x), delta(y,Sy), (D(y,Tx)+D(x,Sy))/2 }.
double big_m(const MapPair& pair, const Point& x, const Point& y);

/// N(x,y) = min{ D(y,Tx), D(x,Sy) }.
double small_n(const MapPair& pair, const Point& x, const Point& y);

/// One evaluation of the contraction condition at (x,y):
///   lhs = f(delta(Tx,Sy)),  rhs = f(M) - phi(f(M)) + psi(N).
/// The condition holds at (x,y) iff residual = rhs - lhs >= 0.
struct ConditionResidual {
  Point x, y;
  double lhs = 0;
  double m = 0;
  double n = 0;
  double rhs = 0;
  double residual = 0;
};

ConditionResidual residual(const MapPair& pair, const GaugeTriple& gauges, const Point& x, const Point& y);

/// Axis-aligned box, the v1 domain shape. One axis per coordinate.
struct DomainBox {
  std::vector<std::array<double, 2>> axes;
  int dim() const { return static_cast<int>(axes.size()); }
};

struct SamplerSpec {
  enum class Kind { Grid, Random };
  Kind kind = Kind::Grid;
  int resolution = 201;     // grid points per axis
  long count = 0;           // random: number of (x,y) samples
  std::uint64_t seed = 0;   // random only
};

/// Points visited by the sampler, in scan order (lexicographic for the
/// grid kind).
std::vector<Point> sample_domain(const DomainBox& domain, const SamplerSpec& sampler);

struct CertificationReport {
  DomainBox domain;
  SamplerSpec sampler;
  long n_points = 0;  // evaluated (x,y) pairs
  double min_residual = 0;
  Point arg_x, arg_y;
  bool has_min = false;
  /// Violations (residual < -tol) in lexicographic (x,y) order, capped.
  std::vector<ConditionResidual> violations;
  long n_violations = 0;  // total, including beyond the cap
  bool certified = false;
  double tol = 1e-12;
  int violation_cap = 100;
};

/// Evaluates the residual at every sampled (x,y) pair. Grid samplers
/// pair every domain point with every other (resolution^2 pairs in 1d);
/// random samplers draw `count` independent pairs. Deterministic for a
/// fixed sampler spec, and independent of evaluation order.
CertificationReport certify(const MapPair& pair, const GaugeTriple& gauges, const DomainBox& domain,
                            const SamplerSpec& sampler, double tol = 1e-12, int violation_cap = 100);

/// Evaluation over an explicit pair list; building block for certify
/// and for order-independence checks.
CertificationReport certify_pairs(const MapPair& pair, const GaugeTriple& gauges,
                                  const std::vector<std::pair<Point, Point>>& samples, double tol = 1e-12,
                                  int violation_cap = 100);

/// Associative, commutative merge of partial reports. Min ties break
/// lexicographically on (x,y); violation lists are merged in
/// lexicographic order and re-capped.
CertificationReport merge_reports(const CertificationReport& a, const CertificationReport& b);

nlohmann::json report_to_json(const CertificationReport& report);

}  // namespace endcert
