#include "endcert/metric.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace endcert {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

}  // namespace

MetricSpace MetricSpace::real_line() { return MetricSpace(Kind::RealLine, 1); }

MetricSpace MetricSpace::euclidean(int dim) {
  require(dim >= 1, "euclidean space needs dim >= 1");
  return MetricSpace(Kind::Euclidean, dim);
}

MetricSpace MetricSpace::chebyshev(int dim) {
  require(dim >= 1, "chebyshev space needs dim >= 1");
  return MetricSpace(Kind::Chebyshev, dim);
}

MetricSpace MetricSpace::finite_table(Eigen::MatrixXd d) {
  require(d.rows() == d.cols() && d.rows() >= 1, "distance table must be square and nonempty");
  const auto n = d.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    require(d(i, i) == 0.0, "distance table must have zero diagonal");
    for (Eigen::Index j = 0; j < n; ++j) {
      require(std::isfinite(d(i, j)) && d(i, j) >= 0.0, "distance table entries must be finite and nonnegative");
      require(d(i, j) == d(j, i), "distance table must be symmetric");
      require(i == j || d(i, j) > 0.0, "distinct table points must have positive distance");
    }
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        require(d(i, k) <= d(i, j) + d(j, k), "distance table violates the triangle inequality");
  MetricSpace s(Kind::FiniteTable, 1);
  s.table_ = std::move(d);
  return s;
}

Point::Point(double x) : coords(1) {
  coords[0] = x;
  require(std::isfinite(x), "point coordinates must be finite");
}

Point::Point(Eigen::VectorXd v) : coords(std::move(v)) {
  require(coords.size() >= 1, "point needs at least one coordinate");
  require(all_finite(coords), "point coordinates must be finite");
}

double Point::scalar() const {
  require(coords.size() == 1, "scalar() requires a 1-d point");
  return coords[0];
}

bool lex_less(const Point& a, const Point& b) {
  const auto n = std::min(a.coords.size(), b.coords.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (a.coords[i] < b.coords[i]) return true;
    if (a.coords[i] > b.coords[i]) return false;
  }
  return a.coords.size() < b.coords.size();
}

bool same_point(const Point& a, const Point& b) {
  return a.coords.size() == b.coords.size() && a.coords == b.coords;
}

BoundedSet BoundedSet::interval(double lo, double hi) {
  require(std::isfinite(lo) && std::isfinite(hi), "interval bounds must be finite");
  require(lo <= hi, "interval requires lo <= hi");
  BoundedSet s;
  s.is_interval_ = true;
  s.lo_ = lo;
  s.hi_ = hi;
  return s;
}

BoundedSet BoundedSet::points(std::vector<Point> pts) {
  require(!pts.empty(), "finite set must be nonempty");
  const int d = pts.front().dim();
  for (const auto& p : pts) {
    require(p.dim() == d, "finite set points must share a dimension");
    require(all_finite(p.coords), "finite set points must be finite");
  }
  BoundedSet s;
  s.pts_ = std::move(pts);
  return s;
}

double BoundedSet::lo() const {
  require(is_interval_, "lo() on a finite set");
  return lo_;
}

double BoundedSet::hi() const {
  require(is_interval_, "hi() on a finite set");
  return hi_;
}

const std::vector<Point>& BoundedSet::points() const {
  require(!is_interval_, "points() on an interval");
  return pts_;
}

BoundedSet singleton(const MetricSpace& space, const Point& p) {
  if (space.kind() == MetricSpace::Kind::RealLine) return BoundedSet::interval(p.scalar(), p.scalar());
  return BoundedSet::points({p});
}

namespace {

int table_index(const MetricSpace& space, const Point& p) {
  require(p.dim() == 1, "table point must be a single index");
  const double v = p.coords[0];
  const double r = std::round(v);
  require(r == v, "table point index must be integral");
  require(r >= 0 && r < space.table_size(), "table point index out of bounds");
  return static_cast<int>(r);
}

void check_membership(const MetricSpace& space, const Point& p) {
  switch (space.kind()) {
    case MetricSpace::Kind::RealLine:
      require(p.dim() == 1, "real-line point must be 1-d");
      break;
    case MetricSpace::Kind::Euclidean:
    case MetricSpace::Kind::Chebyshev:
      require(p.dim() == space.dim(), "point dimension mismatch");
      break;
    case MetricSpace::Kind::FiniteTable:
      table_index(space, p);
      break;
  }
}

void check_set(const MetricSpace& space, const BoundedSet& A) {
  if (A.is_interval()) {
    require(space.kind() == MetricSpace::Kind::RealLine, "interval sets are only valid on the real line");
  } else {
    for (const auto& p : A.points()) check_membership(space, p);
  }
}

// distance from a scalar to an interval; 0 inside
double point_interval_gap(double x, double lo, double hi) {
  return std::max({0.0, lo - x, x - hi});
}

double point_interval_sup(double x, double lo, double hi) {
  return std::max(std::abs(x - lo), std::abs(x - hi));
}

}  // namespace

double dist(const MetricSpace& space, const Point& p, const Point& q) {
  check_membership(space, p);
  check_membership(space, q);
  switch (space.kind()) {
    case MetricSpace::Kind::RealLine:
      return std::abs(p.coords[0] - q.coords[0]);
    case MetricSpace::Kind::Euclidean:
      return (p.coords - q.coords).norm();
    case MetricSpace::Kind::Chebyshev:
      return (p.coords - q.coords).lpNorm<Eigen::Infinity>();
    case MetricSpace::Kind::FiniteTable:
      return space.table()(table_index(space, p), table_index(space, q));
  }
  throw std::logic_error("unreachable");
}

double gap(const MetricSpace& space, const BoundedSet& A, const BoundedSet& B) {
  check_set(space, A);
  check_set(space, B);
  if (A.is_interval() && B.is_interval()) {
    // [a,b], [c,d]: inf attained at facing endpoints, 0 on overlap
    return std::max({0.0, B.lo() - A.hi(), A.lo() - B.hi()});
  }
  if (A.is_interval() || B.is_interval()) {
    const BoundedSet& iv = A.is_interval() ? A : B;
    const BoundedSet& fs = A.is_interval() ? B : A;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : fs.points()) best = std::min(best, point_interval_gap(p.scalar(), iv.lo(), iv.hi()));
    return best;
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& a : A.points())
    for (const auto& b : B.points()) best = std::min(best, dist(space, a, b));
  return best;
}

double sup_dist(const MetricSpace& space, const BoundedSet& A, const BoundedSet& B) {
  check_set(space, A);
  check_set(space, B);
  if (A.is_interval() && B.is_interval()) {
    const double a = A.lo(), b = A.hi(), c = B.lo(), d = B.hi();
    return std::max({std::abs(a - c), std::abs(a - d), std::abs(b - c), std::abs(b - d)});
  }
  if (A.is_interval() || B.is_interval()) {
    const BoundedSet& iv = A.is_interval() ? A : B;
    const BoundedSet& fs = A.is_interval() ? B : A;
    double best = 0.0;
    for (const auto& p : fs.points()) best = std::max(best, point_interval_sup(p.scalar(), iv.lo(), iv.hi()));
    return best;
  }
  double best = 0.0;
  for (const auto& a : A.points())
    for (const auto& b : B.points()) best = std::max(best, dist(space, a, b));
  return best;
}

namespace {

Point sample_uniform(const BoundedSet& A, std::mt19937_64& rng) {
  if (A.is_interval()) {
    const double x = A.lo() + uniform01(rng) * (A.hi() - A.lo());
    return Point(std::clamp(x, A.lo(), A.hi()));
  }
  return A.points()[uniform_index(rng, A.points().size())];
}

}  // namespace

double sup_dist_oracle(const MetricSpace& space, const BoundedSet& A, const BoundedSet& B,
                       int n_samples, std::uint64_t seed) {
  check_set(space, A);
  check_set(space, B);
  require(n_samples >= 1, "n_samples must be >= 1");
  std::mt19937_64 rng(seed);
  double best = 0.0;
  if (A.is_interval() && B.is_interval()) {
    const double alo = A.lo(), ahi = A.hi(), blo = B.lo(), bhi = B.hi();
    for (int i = 0; i < n_samples; ++i) {
      const double a = std::clamp(alo + uniform01(rng) * (ahi - alo), alo, ahi);
      const double b = std::clamp(blo + uniform01(rng) * (bhi - blo), blo, bhi);
      best = std::max(best, std::abs(a - b));
    }
    return best;
  }
  for (int i = 0; i < n_samples; ++i) {
    const Point a = sample_uniform(A, rng);
    const Point b = sample_uniform(B, rng);
    best = std::max(best, dist(space, a, b));
  }
  return best;
}

double gap_oracle(const MetricSpace& space, const BoundedSet& A, const BoundedSet& B,
                  int n_samples, std::uint64_t seed) {
  check_set(space, A);
  check_set(space, B);
  require(n_samples >= 1, "n_samples must be >= 1");
  std::mt19937_64 rng(seed);
  double best = std::numeric_limits<double>::infinity();
  if (A.is_interval() && B.is_interval()) {
    const double alo = A.lo(), ahi = A.hi(), blo = B.lo(), bhi = B.hi();
    for (int i = 0; i < n_samples; ++i) {
      const double a = std::clamp(alo + uniform01(rng) * (ahi - alo), alo, ahi);
      const double b = std::clamp(blo + uniform01(rng) * (bhi - blo), blo, bhi);
      best = std::min(best, std::abs(a - b));
    }
    return best;
  }
  for (int i = 0; i < n_samples; ++i) {
    const Point a = sample_uniform(A, rng);
    const Point b = sample_uniform(B, rng);
    best = std::min(best, dist(space, a, b));
  }
  return best;
}

}  // namespace endcert
