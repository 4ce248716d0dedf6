#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace endcert {

/// Ambient metric space. Four kinds are supported: the real line with
/// |x-y|, n-dimensional Euclidean and Chebyshev spaces, and a finite
/// space given by an explicit pairwise distance table.
class MetricSpace {
 public:
  enum class Kind { RealLine, Euclidean, Chebyshev, FiniteTable };

  static MetricSpace real_line();
  static MetricSpace euclidean(int dim);
  static MetricSpace chebyshev(int dim);
  /// Validates symmetry, zero diagonal, nonnegativity and the triangle
  /// inequality over all triples before accepting the table.
  static MetricSpace finite_table(Eigen::MatrixXd distances);

  Kind kind() const { return kind_; }
  /// Coordinate dimension; 1 for real-line and finite-table spaces
  /// (table points are indices stored as a single coordinate).
  int dim() const { return dim_; }
  int table_size() const { return static_cast<int>(table_.rows()); }
  const Eigen::MatrixXd& table() const { return table_; }

 private:
  MetricSpace(Kind k, int dim) : kind_(k), dim_(dim) {}
  Kind kind_;
  int dim_;
  Eigen::MatrixXd table_;
};

/// A point of the ambient space. For finite-table spaces the single
/// coordinate holds the row index.
struct Point {
  Eigen::VectorXd coords;

  Point() = default;
  explicit Point(double x);
  explicit Point(Eigen::VectorXd v);

  int dim() const { return static_cast<int>(coords.size()); }
  /// Value of a 1-d point.
  double scalar() const;
};

/// Lexicographic order on coordinates; the tie-break order used
/// throughout for deterministic argmins and clustering.
bool lex_less(const Point& a, const Point& b);
bool same_point(const Point& a, const Point& b);

/// Nonempty bounded subset of the space: a closed interval [lo,hi]
/// (real line only; lo==hi is the canonical singleton there) or a
/// finite point set. Empty sets are rejected at construction.
class BoundedSet {
 public:
  static BoundedSet interval(double lo, double hi);
  static BoundedSet points(std::vector<Point> pts);

  bool is_interval() const { return is_interval_; }
  double lo() const;
  double hi() const;
  const std::vector<Point>& points() const;

 private:
  BoundedSet() = default;
  bool is_interval_ = false;
  double lo_ = 0, hi_ = 0;
  std::vector<Point> pts_;
};

/// Canonical singleton {p}: degenerate interval on the real line,
/// one-element point set elsewhere.
BoundedSet singleton(const MetricSpace& space, const Point& p);

/// The metric d. Throws std::invalid_argument on dimension mismatch or
/// points that do not belong to the space.
double dist(const MetricSpace& space, const Point& p, const Point& q);

/// D(A,B) = inf { d(a,b) : a in A, b in B }. Exact closed forms:
/// max(0, c-b, a-d) for intervals [a,b],[c,d]; exhaustive min for
/// finite sets.
double gap(const MetricSpace& space, const BoundedSet& A, const BoundedSet& B);

/// delta(A,B) = sup { d(a,b) : a in A, b in B }. For intervals the max
/// of the four endpoint-pair distances; exhaustive max for finite sets.
double sup_dist(const MetricSpace& space, const BoundedSet& A, const BoundedSet& B);

/// Uniform double in [0,1) from the top 53 bits of one draw. Explicit
/// mapping instead of std::uniform_real_distribution, whose output is
/// implementation-defined; seeded results must be identical everywhere.
inline double uniform01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

/// Uniform index in [0, n).
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

/// Monte-Carlo lower bound on sup_dist: max of d over n_samples
/// uniformly sampled pairs. Always <= sup_dist(A,B).
double sup_dist_oracle(const MetricSpace& space, const BoundedSet& A, const BoundedSet& B,
                       int n_samples, std::uint64_t seed);

/// Monte-Carlo upper bound on gap: min of d over sampled pairs.
double gap_oracle(const MetricSpace& space, const BoundedSet& A, const BoundedSet& B,
                  int n_samples, std::uint64_t seed);

}  // namespace endcert
