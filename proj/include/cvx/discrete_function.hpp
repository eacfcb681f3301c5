#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cvx/rational.hpp"

namespace cvx {

// A function f:[n] -> Q given by its value table. Indices are 1-based and
// the table is immutable after construction.
class DiscreteFunction {
 public:
  explicit DiscreteFunction(std::vector<Rational> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("DiscreteFunction: empty value table");
  }

  static DiscreteFunction from_ints(const std::vector<long>& vals) {
    std::vector<Rational> rs;
    rs.reserve(vals.size());
    for (long v : vals) rs.emplace_back(v);
    return DiscreteFunction(std::move(rs));
  }

  int n() const { return static_cast<int>(values_.size()); }

  const Rational& value(int i) const {
    if (i < 1 || i > n()) throw std::domain_error("DiscreteFunction: index out of range");
    return values_[static_cast<std::size_t>(i - 1)];
  }

  const std::vector<Rational>& values() const { return values_; }

  friend bool operator==(const DiscreteFunction& a, const DiscreteFunction& b) {
    return a.values_ == b.values_;
  }

 private:
  std::vector<Rational> values_;
};

struct DerivativeProfile {
  std::vector<Rational> deltas;  // deltas[i-1] = f(i+1) - f(i)
  std::size_t distinct_count = 0;
};

inline Rational discrete_derivative(const DiscreteFunction& f, int i) {
  if (i < 1 || i > f.n() - 1) throw std::domain_error("discrete_derivative: index out of range");
  return f.value(i + 1) - f.value(i);
}

inline DerivativeProfile derivative_profile(const DiscreteFunction& f) {
  if (f.n() < 2) throw std::domain_error("derivative_profile: needs n >= 2");
  DerivativeProfile p;
  p.deltas.reserve(static_cast<std::size_t>(f.n() - 1));
  for (int i = 1; i + 1 <= f.n(); ++i) p.deltas.push_back(f.value(i + 1) - f.value(i));
  std::vector<Rational> sorted = p.deltas;
  std::sort(sorted.begin(), sorted.end());
  p.distinct_count = static_cast<std::size_t>(
      std::unique(sorted.begin(), sorted.end()) - sorted.begin());
  return p;
}

// number of distinct discrete derivatives; 0 for a single point
inline std::size_t distinct_derivative_count(const DiscreteFunction& f) {
  if (f.n() < 2) return 0;
  return derivative_profile(f).distinct_count;
}

inline bool is_convex(const DiscreteFunction& f) {
  for (int i = 1; i + 2 <= f.n(); ++i)
    if (f.value(i + 1) - f.value(i) > f.value(i + 2) - f.value(i + 1)) return false;
  return true;
}

inline Rational slope(const DiscreteFunction& f, int x, int y) {
  if (x == y) throw std::domain_error("slope: coincident points");
  return (f.value(y) - f.value(x)) / Rational(y - x);
}

namespace detail {
// slope(x,y) > slope(y,z) via cross-multiplication; x < y < z
inline bool triple_violates(const DiscreteFunction& f, int x, int y, int z) {
  return (f.value(y) - f.value(x)) * Rational(z - y) >
         (f.value(z) - f.value(y)) * Rational(y - x);
}
}  // namespace detail

// First consecutive violating triple of the sorted deduplicated point set,
// if any. Consecutive triples suffice: a non-convex restriction always has
// one.
inline std::optional<std::array<int, 3>> find_violating_triple(const DiscreteFunction& f,
                                                               std::vector<int> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  for (int p : pts)
    if (p < 1 || p > f.n()) throw std::domain_error("find_violating_triple: point out of range");
  for (std::size_t i = 0; i + 2 < pts.size(); ++i)
    if (detail::triple_violates(f, pts[i], pts[i + 1], pts[i + 2]))
      return std::array<int, 3>{pts[i], pts[i + 1], pts[i + 2]};
  return std::nullopt;
}

inline bool violates_convexity(const DiscreteFunction& f, const std::vector<int>& pts) {
  return find_violating_triple(f, pts).has_value();
}

// An ordered subset B of [n] together with the restriction f|_B.
// order(x) of a member is its 1-based rank in B.
class SubdomainView {
 public:
  SubdomainView(const DiscreteFunction& base, std::vector<int> points)
      : base_(&base), points_(std::move(points)) {
    if (points_.empty()) throw std::invalid_argument("SubdomainView: empty point set");
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (points_[i] < 1 || points_[i] > base_->n())
        throw std::invalid_argument("SubdomainView: point out of range");
      if (i > 0 && points_[i] <= points_[i - 1])
        throw std::invalid_argument("SubdomainView: points not strictly increasing");
    }
  }

  static SubdomainView full(const DiscreteFunction& base) {
    std::vector<int> pts(static_cast<std::size_t>(base.n()));
    for (int i = 1; i <= base.n(); ++i) pts[static_cast<std::size_t>(i - 1)] = i;
    return SubdomainView(base, std::move(pts));
  }

  const DiscreteFunction& base() const { return *base_; }
  const std::vector<int>& points() const { return points_; }
  int size() const { return static_cast<int>(points_.size()); }

  int point_at(int order) const {
    if (order < 1 || order > size()) throw std::domain_error("SubdomainView: order out of range");
    return points_[static_cast<std::size_t>(order - 1)];
  }

  int order_of(int point) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), point);
    if (it == points_.end() || *it != point)
      throw std::domain_error("SubdomainView: point not in subdomain");
    return static_cast<int>(it - points_.begin()) + 1;
  }

  const Rational& value_at_order(int order) const { return base_->value(point_at(order)); }

 private:
  const DiscreteFunction* base_;
  std::vector<int> points_;
};

}  // namespace cvx
