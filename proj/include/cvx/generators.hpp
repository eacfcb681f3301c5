#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cvx/convex_distance.hpp"
#include "cvx/discrete_function.hpp"
#include "cvx/rational.hpp"
#include "cvx/rng.hpp"

namespace cvx {

struct InstanceLabel {
  std::string kind;
  std::map<std::string, Rational> params;
  std::optional<int> claimed_distance;  // oracle-certified when present
  int claimed_s = 1;                    // upper bound on distinct derivatives
};

// f(i) = a + r1 (i-1) for i <= j, then slope r2 afterwards; convex iff r1 <= r2
inline DiscreteFunction two_piece(const Rational& a, const Rational& r1, int j, const Rational& r2,
                                  int n) {
  if (n < 1) throw std::domain_error("two_piece: n must be positive");
  if (j < 1 || j > n) throw std::domain_error("two_piece: kink out of range");
  std::vector<Rational> vals(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    if (i <= j)
      vals[static_cast<std::size_t>(i - 1)] = a + r1 * Rational(i - 1);
    else
      vals[static_cast<std::size_t>(i - 1)] = a + r1 * Rational(j - 1) + r2 * Rational(i - j);
  }
  return DiscreteFunction(std::move(vals));
}

// f(i) = i up to k, f(k+1) = k, then f(j) = j - 1: two derivatives {0,1} with
// the single 0 step at position k, yet nearly (1/2)-far from convex at k = n/2
inline DiscreteFunction half_staircase(int n, int k) {
  if (k < 2 || k > n - 2) throw std::domain_error("half_staircase: requires 2 <= k <= n-2");
  std::vector<Rational> vals(static_cast<std::size_t>(n));
  for (int i = 1; i <= k; ++i) vals[static_cast<std::size_t>(i - 1)] = Rational(i);
  vals[static_cast<std::size_t>(k)] = Rational(k);
  for (int j = k + 2; j <= n; ++j) vals[static_cast<std::size_t>(j - 1)] = Rational(j - 1);
  return DiscreteFunction(std::move(vals));
}

namespace detail {
// s distinct rational slopes, sorted ascending
inline std::vector<Rational> draw_distinct_slopes(int s, Rng& rng, bool integral) {
  std::set<Rational> set;
  const long span = 4L * s + 64;
  while (static_cast<int>(set.size()) < s) {
    const long num = static_cast<long>(rng.below(static_cast<std::uint64_t>(2 * span + 1))) - span;
    const long den = integral ? 1 : 1 + static_cast<long>(rng.below(8));
    set.insert(Rational(num, den));
  }
  return std::vector<Rational>(set.begin(), set.end());
}

// split the n-1 derivative positions into s nonempty consecutive blocks
inline std::vector<int> draw_block_sizes(int n, int s, Rng& rng) {
  std::set<int> cuts;
  while (static_cast<int>(cuts.size()) < s - 1)
    cuts.insert(1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 2))));
  std::vector<int> sizes;
  int prev = 0;
  for (int c : cuts) {
    sizes.push_back(c - prev);
    prev = c;
  }
  sizes.push_back(n - 1 - prev);
  return sizes;
}

inline DiscreteFunction from_slope_blocks(const Rational& start,
                                          const std::vector<Rational>& slopes,
                                          const std::vector<int>& sizes) {
  std::vector<Rational> vals{start};
  for (std::size_t b = 0; b < slopes.size(); ++b)
    for (int t = 0; t < sizes[b]; ++t) vals.push_back(vals.back() + slopes[b]);
  return DiscreteFunction(std::move(vals));
}
}  // namespace detail

// piecewise-linear convex instance with exactly s distinct derivatives
inline DiscreteFunction random_convex(int n, int s, Rng& rng) {
  if (n < 2 || s < 1 || s > n - 1)
    throw std::domain_error("random_convex: requires 1 <= s <= n-1");
  const std::vector<Rational> slopes = detail::draw_distinct_slopes(s, rng, false);
  const std::vector<int> sizes =
      s == 1 ? std::vector<int>{n - 1} : detail::draw_block_sizes(n, s, rng);
  const Rational start(static_cast<long>(rng.below(21)) - 10);
  return detail::from_slope_blocks(start, slopes, sizes);
}

// Calibrated far instance: integer slopes in a shuffled (non-sorted) block
// order, certified by the exact oracle to have distance strictly greater
// than min_rel_dist * n. Farness is certified per instance, not assumed
// from the construction.
inline std::pair<DiscreteFunction, InstanceLabel> random_far(int n, int s,
                                                             const Rational& min_rel_dist,
                                                             Rng& rng) {
  if (s < 2) throw std::domain_error("random_far: requires s >= 2");
  if (n < 4 || s > n - 1) throw std::domain_error("random_far: requires 2 <= s <= n-1");
  if (!(min_rel_dist > Rational(0) && min_rel_dist <= Rational(1, 2)))
    throw std::domain_error("random_far: min_rel_dist outside (0, 1/2]");

  const int max_retries = 64;
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    std::vector<Rational> slopes = detail::draw_distinct_slopes(s, rng, true);
    if (attempt < max_retries / 2) {
      for (std::size_t i = slopes.size(); i > 1; --i)
        std::swap(slopes[i - 1], slopes[rng.below(i)]);
      if (std::is_sorted(slopes.begin(), slopes.end())) continue;
    } else {
      // fallback arrangement with a descent at every block boundary
      std::reverse(slopes.begin(), slopes.end());
    }
    const std::vector<int> sizes = detail::draw_block_sizes(n, s, rng);
    DiscreteFunction f = detail::from_slope_blocks(Rational(0), slopes, sizes);
    const DistanceReport rep = distance_to_convex(f);
    if (Rational(rep.distance) > min_rel_dist * Rational(n)) {
      InstanceLabel label;
      label.kind = "far-random";
      label.params["n"] = Rational(n);
      label.params["min_rel_dist"] = min_rel_dist;
      label.claimed_distance = rep.distance;
      label.claimed_s = s;
      return {std::move(f), std::move(label)};
    }
  }
  throw std::runtime_error("random_far: retries exhausted; relax parameters");
}

// Stretch g over [s] to f over [s*k]: anchors f((i-1)k+1) = g(i), linear fill
// with slope_i = (g(i+1)-g(i))/k between anchors, and the positions after the
// last anchor continue with the final slope. Preserves convexity and scales
// distance by at least k.
inline DiscreteFunction lift(const DiscreteFunction& g, int k) {
  const int s = g.n();
  if (s < 2) throw std::domain_error("lift: base function needs at least 2 points");
  if (k < 1) throw std::domain_error("lift: factor must be positive");
  const int n = s * k;
  std::vector<Rational> vals(static_cast<std::size_t>(n));
  for (int i = 1; i <= s; ++i) vals[static_cast<std::size_t>((i - 1) * k)] = g.value(i);
  for (int i = 1; i <= s - 1; ++i) {
    const Rational sl = (g.value(i + 1) - g.value(i)) / Rational(k);
    for (int j = 1; j <= k - 1; ++j)
      vals[static_cast<std::size_t>((i - 1) * k + j)] = g.value(i) + Rational(j) * sl;
  }
  if (k > 1) {
    const Rational tail_slope = (g.value(s) - g.value(s - 1)) / Rational(k);
    for (int j = 1; j <= k - 1; ++j)
      vals[static_cast<std::size_t>((s - 1) * k + j)] = g.value(s) + Rational(j) * tail_slope;
  }
  return DiscreteFunction(std::move(vals));
}

// ---------------------------------------------------------------------------
// Pluggable base-distribution slot for lower-bound style experiments. The
// shipped defaults are ordinary random instances, not the hard distributions
// from the literature (those are not public); register alternatives by name.

using BaseDistribution = std::function<DiscreteFunction(int, const Rational&, Rng&)>;

namespace detail {
inline std::map<std::string, BaseDistribution>& base_distribution_registry() {
  static std::map<std::string, BaseDistribution> reg = {
      {"convex-default",
       [](int s, const Rational&, Rng& rng) {
         const int slopes = std::max(1, std::min(s - 1, (s + 1) / 2));
         return random_convex(s, slopes, rng);
       }},
      {"far-default",
       [](int s, const Rational& eps, Rng& rng) {
         const int slopes = std::max(2, std::min(s - 1, (s + 1) / 2));
         return random_far(s, slopes, eps, rng).first;
       }},
  };
  return reg;
}
inline std::mutex& base_distribution_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

inline void register_base_distribution(const std::string& kind, BaseDistribution fn) {
  std::lock_guard<std::mutex> lock(detail::base_distribution_mutex());
  detail::base_distribution_registry()[kind] = std::move(fn);
}

inline DiscreteFunction base_distribution_hook(const std::string& kind, int s, const Rational& eps,
                                               Rng& rng) {
  BaseDistribution fn;
  {
    std::lock_guard<std::mutex> lock(detail::base_distribution_mutex());
    auto& reg = detail::base_distribution_registry();
    auto it = reg.find(kind);
    if (it == reg.end())
      throw std::invalid_argument("base_distribution_hook: unknown kind '" + kind + "'");
    fn = it->second;
  }
  return fn(s, eps, rng);
}

}  // namespace cvx
