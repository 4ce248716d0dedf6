#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace endcert {

enum class GaugeClass { Phi, Omega, Psi };

/// Scalar comparison function on [0,inf). Built-in kinds are analytic
/// and carry a trusted flag; table gauges interpolate linearly and are
/// never trusted.
class GaugeFn {
 public:
  enum class Kind { Linear, Log1p, Power, QuadScale, Identity, Zero, Table };
  enum class Membership { Yes, No, Unknown };

  static GaugeFn linear(double k);
  static GaugeFn log1p();
  static GaugeFn power(double p);
  static GaugeFn quad_scale(double c);
  static GaugeFn identity();
  /// The zero function. As a psi it is the disabled marker for the
  /// psi-free uniqueness mode; as a phi/omega candidate it fails the
  /// class checks.
  static GaugeFn zero();
  static GaugeFn table(std::vector<double> ts, std::vector<double> vs);

  double operator()(double t) const;

  Kind kind() const { return kind_; }
  double param() const { return param_; }
  const std::vector<double>& table_ts() const { return ts_; }
  const std::vector<double>& table_vs() const { return vs_; }
  bool trusted() const { return kind_ != Kind::Table; }
  bool is_zero() const { return kind_ == Kind::Zero; }
  /// Analytic class membership for trusted kinds; Unknown for tables.
  Membership member_of(GaugeClass c) const;
  std::string describe() const;

 private:
  GaugeFn(Kind k, double p) : kind_(k), param_(p) {}
  Kind kind_;
  double param_ = 0;
  std::vector<double> ts_, vs_;
};

/// Probe schedule for the empirical class verifiers. The defaults are
/// the fixed schedule used everywhere: 64 log-spaced grid points on
/// [1e-6, 10] and ratio scales t = 2^-j, j = 0..40.
struct ProbeConfig {
  int grid_points = 64;
  double grid_lo = 1e-6;
  double grid_hi = 10.0;
  int ratio_scales = 40;
  double ratio_floor = 1e-3;
  double tol = 1e-9;
  std::uint64_t seed = 0;
};

struct ClassReport {
  GaugeClass cls;
  bool pass = false;
  /// Set when the verdict rests on heuristics only (non-trusted gauge).
  bool warning = false;
  std::string failed_condition;  // "(i)".."(iv)", empty on pass
  std::vector<double> witness;   // input value(s) exhibiting the failure
  std::string detail;
  /// Phi only: empirical infimum of g(t)/t along the canonical
  /// vanishing sequence, clamped below 1.
  double best_k = 0.0;
};

ClassReport check_phi(const GaugeFn& g, const ProbeConfig& probe = {});
ClassReport check_omega(const GaugeFn& g, const ProbeConfig& probe = {});
ClassReport check_psi(const GaugeFn& g, const ProbeConfig& probe = {});
ClassReport check_class(const GaugeFn& g, GaugeClass c, const ProbeConfig& probe = {});

/// The (f, phi, psi) triple driving the contraction condition.
struct GaugeTriple {
  GaugeFn f;
  GaugeFn phi;
  GaugeFn psi;
};

/// f = identity, phi(t) = (1-k)t: the condition collapses to the
/// plain ratio form delta(Tx,Sy) <= k*M(x,y) + psi(N(x,y)).
GaugeTriple preset_banach_like(double k, GaugeFn psi = GaugeFn::zero());

/// Rejects a triple whose members neither carry analytic membership
/// nor pass their class verifier. psi may be the zero marker.
void validate_triple(const GaugeTriple& t, const ProbeConfig& probe = {});

GaugeFn gauge_from_json(const nlohmann::json& j);
nlohmann::json gauge_to_json(const GaugeFn& g);
nlohmann::json class_report_to_json(const ClassReport& r);
std::string class_name(GaugeClass c);

}  // namespace endcert
