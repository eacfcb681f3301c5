#pragma once

#include <bit>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "cvx/discrete_function.hpp"

namespace cvx {

// Ground-truth distance machinery. Distance to convexity is Hamming: the
// number of points whose values must change, which equals n minus the size
// of the largest index set whose restriction is convex (such a partial
// function always extends to a convex total function, see repair()).

struct DistanceReport {
  int distance = 0;
  std::vector<int> witness_keep;  // lexicographically smallest maximum witness
  DiscreteFunction repaired;      // convex, agrees with f on witness_keep
};

namespace detail {

struct ExactSlopeCmp {
  const DiscreteFunction* f;
  // sign of slope(a,b) - slope(c,d), all pairs increasing
  int operator()(int a, int b, int c, int d) const {
    const Rational lhs = (f->value(b) - f->value(a)) * Rational(d - c);
    const Rational rhs = (f->value(d) - f->value(c)) * Rational(b - a);
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
  }
};

struct Int64SlopeCmp {
  const std::vector<std::int64_t>* v;  // index 0 unused
  int operator()(int a, int b, int c, int d) const {
    using i128 = __int128;
    const i128 lhs = (static_cast<i128>((*v)[static_cast<std::size_t>(b)]) -
                      (*v)[static_cast<std::size_t>(a)]) *
                     (d - c);
    const i128 rhs = (static_cast<i128>((*v)[static_cast<std::size_t>(d)]) -
                      (*v)[static_cast<std::size_t>(c)]) *
                     (b - a);
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
  }
};

// Chain DP over pair states. tail(i,j) = length of the longest convex
// subsequence whose first two elements are i < j, counting both. Processing
// the second index j downward, all tail(j, k) are final when step j runs, so
// the transition max over {k > j : slope(j,k) >= slope(i,j)} is answered by
// a sorted-by-slope successor table with suffix maxima.
template <class SlopeCmp>
std::vector<int> lcs_chain(int n, const SlopeCmp& scmp) {
  if (n == 1) return {1};
  const std::size_t N = static_cast<std::size_t>(n);
  std::vector<std::uint16_t> tail(N * N, 0);
  auto tl = [&](int i, int j) -> std::uint16_t& {
    return tail[static_cast<std::size_t>(i - 1) * N + static_cast<std::size_t>(j - 1)];
  };

  std::vector<int> succ;
  std::vector<std::uint16_t> suffmax;
  succ.reserve(N);
  for (int j = n; j >= 2; --j) {
    succ.clear();
    for (int k = j + 1; k <= n; ++k) succ.push_back(k);
    std::sort(succ.begin(), succ.end(), [&](int k1, int k2) {
      const int c = scmp(j, k1, j, k2);
      return c != 0 ? c < 0 : k1 < k2;
    });
    suffmax.assign(succ.size() + 1, 0);
    for (std::size_t t = succ.size(); t-- > 0;)
      suffmax[t] = std::max(suffmax[t + 1], tl(j, succ[t]));

    for (int i = 1; i < j; ++i) {
      // first successor with slope(j,k) >= slope(i,j)
      std::size_t lo = 0, hi = succ.size();
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (scmp(j, succ[mid], i, j) >= 0)
          hi = mid;
        else
          lo = mid + 1;
      }
      const int best = suffmax[lo];
      tl(i, j) = static_cast<std::uint16_t>(1 + (best > 1 ? best : 1));
    }
  }

  int best_len = 1;
  for (int i = 1; i < n; ++i)
    for (int j = i + 1; j <= n; ++j) best_len = std::max<int>(best_len, tl(i, j));

  // Greedy reconstruction of the lexicographically smallest maximum witness:
  // extend with the smallest admissible point whose tail completes exactly.
  int a1 = 0, a2 = 0;
  for (int i = 1; i < n && a1 == 0; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (tl(i, j) == best_len) {
        a1 = i;
        a2 = j;
        break;
      }
  std::vector<int> out{a1, a2};
  int remaining = best_len - 2;
  int prev = a1, cur = a2;
  while (remaining > 0) {
    bool found = false;
    for (int k = cur + 1; k <= n; ++k) {
      if (tl(cur, k) == remaining + 1 && scmp(cur, k, prev, cur) >= 0) {
        out.push_back(k);
        prev = cur;
        cur = k;
        --remaining;
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("lcs_chain: broken reconstruction invariant");
  }
  return out;
}

inline bool all_values_int64(const DiscreteFunction& f, std::vector<std::int64_t>& out) {
  out.assign(static_cast<std::size_t>(f.n()) + 1, 0);
  for (int i = 1; i <= f.n(); ++i) {
    const Rational& v = f.value(i);
    if (!v.fits_int64()) return false;
    out[static_cast<std::size_t>(i)] = v.as_int64();
  }
  return true;
}

}  // namespace detail

// Maximum-cardinality index set S with f|_S convex, ties broken by the
// lexicographically smallest S. Worst case O(n^2 log n) time, O(n^2) space.
inline std::vector<int> longest_convex_subsequence(const DiscreteFunction& f) {
  const int n = f.n();
  if (n > 8192) throw std::length_error("longest_convex_subsequence: n too large for the DP table");
  std::vector<std::int64_t> ints;
  if (detail::all_values_int64(f, ints)) {
    detail::Int64SlopeCmp cmp{&ints};
    return detail::lcs_chain(n, cmp);
  }
  detail::ExactSlopeCmp cmp{&f};
  return detail::lcs_chain(n, cmp);
}

// Convex completion of a convex partial function: linear interpolation
// between kept points, linear extension with the boundary slopes outside
// (slope 0 on both sides when only one point is kept).
inline DiscreteFunction repair(const DiscreteFunction& f, const std::vector<int>& keep) {
  if (keep.empty()) throw std::invalid_argument("repair: empty keep set");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 1 || keep[i] > f.n()) throw std::invalid_argument("repair: point out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw std::invalid_argument("repair: keep not strictly increasing");
  }
  if (violates_convexity(f, keep))
    throw std::invalid_argument("repair: kept restriction is not convex");

  const int n = f.n();
  std::vector<Rational> out(static_cast<std::size_t>(n));
  for (std::size_t s = 0; s + 1 < keep.size(); ++s) {
    const int p = keep[s], q = keep[s + 1];
    const Rational sl = slope(f, p, q);
    for (int t = p; t <= q; ++t)
      out[static_cast<std::size_t>(t - 1)] = f.value(p) + sl * Rational(t - p);
  }
  const int first = keep.front(), last = keep.back();
  out[static_cast<std::size_t>(first - 1)] = f.value(first);
  const Rational left_slope = keep.size() >= 2 ? slope(f, keep[0], keep[1]) : Rational(0);
  const Rational right_slope =
      keep.size() >= 2 ? slope(f, keep[keep.size() - 2], keep.back()) : Rational(0);
  for (int t = first - 1; t >= 1; --t)
    out[static_cast<std::size_t>(t - 1)] = f.value(first) - left_slope * Rational(first - t);
  for (int t = last + 1; t <= n; ++t)
    out[static_cast<std::size_t>(t - 1)] = f.value(last) + right_slope * Rational(t - last);
  return DiscreteFunction(std::move(out));
}

inline DistanceReport distance_to_convex(const DiscreteFunction& f) {
  std::vector<int> keep = longest_convex_subsequence(f);
  DiscreteFunction repaired = repair(f, keep);
  if (!is_convex(repaired))
    throw std::logic_error("distance_to_convex: repaired witness is not convex");
  const int d = f.n() - static_cast<int>(keep.size());
  return DistanceReport{d, std::move(keep), std::move(repaired)};
}

// Independent oracle: full enumeration of all 2^n index subsets.
inline int brute_force_distance(const DiscreteFunction& f) {
  const int n = f.n();
  if (n > 18) throw std::length_error("brute_force_distance: n > 18");
  if (n <= 2) return 0;

  const int m = n + 1;
  std::vector<char> viol(static_cast<std::size_t>(m) * m * m, 0);
  for (int x = 1; x <= n; ++x)
    for (int y = x + 1; y <= n; ++y)
      for (int z = y + 1; z <= n; ++z)
        viol[(static_cast<std::size_t>(x) * m + y) * m + z] =
            detail::triple_violates(f, x, y, z) ? 1 : 0;

  int best = 0;
  const std::uint32_t limit = 1u << n;
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    const int pc = std::popcount(mask);
    if (pc <= best) continue;
    std::uint32_t rest = mask;
    int p2 = 0, p1 = 0;
    bool ok = true;
    while (rest != 0) {
      const int i = std::countr_zero(rest) + 1;
      rest &= rest - 1;
      if (p2 != 0 && viol[(static_cast<std::size_t>(p2) * m + p1) * m + i] != 0) {
        ok = false;
        break;
      }
      p2 = p1;
      p1 = i;
    }
    if (ok) best = pc;
  }
  return n - best;
}

}  // namespace cvx
