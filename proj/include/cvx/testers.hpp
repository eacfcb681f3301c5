#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "cvx/counting_oracle.hpp"
#include "cvx/discrete_function.hpp"
#include "cvx/rational.hpp"
#include "cvx/rng.hpp"

namespace cvx {

enum class Verdict { accept, reject };

// a point set violating the convexity condition
struct ViolationWitness {
  std::vector<int> points;
};

// a queried value off the line it must lie on
struct MismatchWitness {
  int position = 0;
  Rational expected;
  Rational actual;
};

// the two boundary lines cross at a non-integer or out-of-range point,
// impossible for a convex function with at most two distinct derivatives
struct NoCrossingWitness {
  Rational crossing;
};

using Witness = std::variant<ViolationWitness, MismatchWitness, NoCrossingWitness>;

struct TestOutcome {
  Verdict verdict = Verdict::accept;
  std::vector<int> queries;  // transcript slice of this invocation, in order
  std::optional<Witness> witness;

  bool rejected() const { return verdict == Verdict::reject; }
};

namespace detail {
inline TestOutcome finish(CountingOracle& o, std::size_t start, Verdict v,
                          std::optional<Witness> w = std::nullopt) {
  TestOutcome out;
  out.verdict = v;
  out.queries.assign(o.transcript().begin() + static_cast<std::ptrdiff_t>(start),
                     o.transcript().end());
  out.witness = std::move(w);
  return out;
}

inline Witness violation_or_fail(const DiscreteFunction& f, std::vector<int> pts) {
  if (auto tri = find_violating_triple(f, std::move(pts)))
    return ViolationWitness{{(*tri)[0], (*tri)[1], (*tri)[2]}};
  throw std::logic_error("tester: expected a violating triple");
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Adaptive 5-query decider for functions with at most 2 distinct derivatives.
//
// Interpolates the left line through (1,2) and the right line through
// (n-1,n), queries their crossing j, and rejects on any inconsistency.
// Under the 2-derivative promise the verdict equals exact convexity.
// Boundary cases: identical lines pick j = ceil(n/2); parallel distinct
// lines make the four base points themselves violate convexity; a
// non-integer or out-of-range crossing is impossible for a convex
// promise-satisfying input, so both reject.
inline TestOutcome adaptive_two_deriv(CountingOracle& o) {
  const int n = o.n();
  if (n < 5) throw std::domain_error("adaptive_two_deriv: requires n >= 5");
  const std::size_t start = o.count();

  const Rational v1 = o.query(1);
  const Rational v2 = o.query(2);
  const Rational vm = o.query(n - 1);
  const Rational vn = o.query(n);
  const Rational r1 = v2 - v1;
  const Rational r2 = vn - vm;
  auto line1 = [&](int x) { return v1 + Rational(x - 1) * r1; };

  int j = 0;
  if (r1 == r2) {
    if (vn != line1(n)) {
      return detail::finish(o, start, Verdict::reject,
                            detail::violation_or_fail(o.function(), {1, 2, n - 1, n}));
    }
    j = (n + 1) / 2;
  } else {
    // f(1) + (x-1) r1 = f(n) - (n-x) r2
    const Rational crossing = (vn - Rational(n) * r2 - v1 + r1) / (r1 - r2);
    if (!crossing.is_integer() || crossing < Rational(1) || crossing > Rational(n))
      return detail::finish(o, start, Verdict::reject, Witness(NoCrossingWitness{crossing}));
    j = static_cast<int>(crossing.as_int64());
  }

  const Rational vj = o.query(j);
  if (auto tri = find_violating_triple(o.function(), {1, 2, j, n - 1, n}))
    return detail::finish(o, start, Verdict::reject,
                          Witness(ViolationWitness{{(*tri)[0], (*tri)[1], (*tri)[2]}}));
  if (vj != line1(j))
    return detail::finish(o, start, Verdict::reject, Witness(MismatchWitness{j, line1(j), vj}));
  return detail::finish(o, start, Verdict::accept);
}

// ---------------------------------------------------------------------------
// Nonadaptive O(1/eps) tester for functions with at most 2 distinct
// derivatives. The `fixed` variant additionally requires the +1 member of
// each probe pair to lie on its line and handles r1 == r2 by checking that
// every queried point sits on the single line; the `literal_paper` variant
// evaluates the probe values against the lines exactly as written in the
// source algorithm (it queries f(x_i + 1) but never reads it).
enum class TwoDerivVariant { fixed, literal_paper };

inline TestOutcome nonadaptive_two_deriv(CountingOracle& o, const Rational& eps,
                                         TwoDerivVariant variant = TwoDerivVariant::fixed) {
  const int n = o.n();
  if (n < 4) throw std::domain_error("nonadaptive_two_deriv: requires n >= 4");
  if (!(eps > Rational(0) && eps < Rational(1)))
    throw std::domain_error("nonadaptive_two_deriv: eps outside (0,1)");
  if (eps * Rational(n) < Rational(2))
    throw std::domain_error("nonadaptive_two_deriv: requires eps*n >= 2");
  const std::size_t start = o.count();

  const long pair_count = floor_to_long(Rational(1) / eps);
  std::vector<int> xs(static_cast<std::size_t>(pair_count));
  for (long i = 1; i <= pair_count; ++i)
    xs[static_cast<std::size_t>(i - 1)] =
        static_cast<int>(round_half_up_to_long(Rational(i) * eps * Rational(n)));

  // the full plan is fixed before any value is read
  std::vector<int> plan = {1, 2, n - 1, n};
  for (int x : xs) {
    plan.push_back(x);
    if (x + 1 <= n) plan.push_back(x + 1);
  }
  std::vector<Rational> val(static_cast<std::size_t>(n) + 1);
  for (int p : plan) val[static_cast<std::size_t>(p)] = o.query(p);

  const Rational r1 = val[2] - val[1];
  const Rational r2 = val[static_cast<std::size_t>(n)] - val[static_cast<std::size_t>(n - 1)];
  auto line1 = [&](int x) { return val[1] + Rational(x - 1) * r1; };
  auto line2 = [&](int x) { return val[static_cast<std::size_t>(n)] - Rational(n - x) * r2; };

  if (r1 > r2)
    return detail::finish(o, start, Verdict::reject,
                          detail::violation_or_fail(o.function(), {1, 2, n - 1, n}));

  auto mismatch = [&](int p, const Rational& want) {
    return detail::finish(o, start, Verdict::reject,
                          Witness(MismatchWitness{p, want, val[static_cast<std::size_t>(p)]}));
  };

  if (variant == TwoDerivVariant::fixed && r1 == r2) {
    std::vector<int> checked = plan;
    std::sort(checked.begin(), checked.end());
    checked.erase(std::unique(checked.begin(), checked.end()), checked.end());
    for (int p : checked)
      if (val[static_cast<std::size_t>(p)] != line1(p)) return mismatch(p, line1(p));
    return detail::finish(o, start, Verdict::accept);
  }

  long j = 0;
  for (long i = 1; i <= pair_count; ++i) {
    const int x = xs[static_cast<std::size_t>(i - 1)];
    bool on = val[static_cast<std::size_t>(x)] == line1(x);
    if (variant == TwoDerivVariant::fixed && x + 1 <= n)
      on = on && val[static_cast<std::size_t>(x + 1)] == line1(x + 1);
    if (on) j = i;
  }
  for (long i = j + 1; i <= pair_count; ++i) {
    const int x = xs[static_cast<std::size_t>(i - 1)];
    if (val[static_cast<std::size_t>(x)] != line2(x)) return mismatch(x, line2(x));
    if (variant == TwoDerivVariant::fixed && x + 1 <= n &&
        val[static_cast<std::size_t>(x + 1)] != line2(x + 1))
      return mismatch(x + 1, line2(x + 1));
  }
  return detail::finish(o, start, Verdict::accept);
}

// ---------------------------------------------------------------------------
// Test-sets over a subdomain: the 4-point probe {a, a', h, h'} with root a,
// hub h whose order is a multiple of the scale 2^k.

struct TestSet {
  int root = 0;  // base position
  int hub = 0;   // base position
  long scale = 1;
  std::array<int, 4> members{};  // {a, a', h, h'} as base positions
};

// iteration budget: max(1, ceil(24 * log2(2 eps |B|))), logs base 2, exact
inline long subdomain_iterations(const Rational& eps, int b_size) {
  const long t = ceil_mul_log2(24, Rational(2) * eps * Rational(b_size));
  return t < 1 ? 1 : t;
}

// largest scale exponent: max(0, ceil(log2(2 eps |B|)))
inline long subdomain_scale_cap(const Rational& eps, int b_size) {
  const long k = ceil_log2(Rational(2) * eps * Rational(b_size));
  return k < 0 ? 0 : k;
}

namespace detail {
// Hub order for root order u within orders 1..m: nearest multiple of 2^k on
// the chosen side, falling back to the other side when none exists there,
// clamped to m-1 so the hub successor exists.
inline int hub_order(int u, long k, int m, bool up) {
  const long p = 1L << k;
  const long up_cand = (u / p + 1) * p;
  const long down_cand = ((u - 1) / p) * p;
  const bool up_ok = up_cand <= m;
  const bool down_ok = down_cand >= p;
  long h;
  if (up ? up_ok : down_ok)
    h = up ? up_cand : down_cand;
  else if (up ? down_ok : up_ok)
    h = up ? down_cand : up_cand;
  else
    h = m;  // 2^k exceeds |B|: no multiple exists at all
  if (h > m - 1) h = m - 1;
  return static_cast<int>(h);
}
}  // namespace detail

// Common-hub construction: for order(x) < order(y) - 1 there is a smallest k
// with a unique multiple of 2^k between the two orders; that multiple serves
// as a shared hub, with scale at most 2*(order(y) - order(x)).
inline std::pair<TestSet, TestSet> common_hub(const SubdomainView& B, int x, int y) {
  const int ox = B.order_of(x), oy = B.order_of(y);
  if (!(ox < oy - 1)) throw std::domain_error("common_hub: requires order(x) < order(y) - 1");
  long p = 1, k = 0;
  auto multiples_between = [&](long pw) {
    return static_cast<long>(oy) / pw - static_cast<long>(ox - 1) / pw;
  };
  while (multiples_between(p) != 1) {
    p <<= 1;
    ++k;
  }
  const long hub_ord = (static_cast<long>(oy) / p) * p;
  if (hub_ord + 1 > B.size() || oy + 1 > B.size())
    throw std::domain_error("common_hub: successor missing for hub or root");
  const int h = B.point_at(static_cast<int>(hub_ord));
  const int hs = B.point_at(static_cast<int>(hub_ord) + 1);
  TestSet tx{x, h, p, {x, B.point_at(ox + 1), h, hs}};
  TestSet ty{y, h, p, {y, B.point_at(oy + 1), h, hs}};
  return {tx, ty};
}

// ---------------------------------------------------------------------------
// Basic tester for convexity over a subdomain B. One-sided: convex inputs
// are never rejected. The random plan (root, scale, direction per iteration)
// is drawn before any value is read, so the transcript is a function of
// (|B|, eps, seed) alone.
inline TestOutcome subdomain_basic(CountingOracle& o, const SubdomainView& B, const Rational& eps,
                                   Rng& rng) {
  if (B.size() < 4) throw std::domain_error("subdomain_basic: requires |B| >= 4");
  if (!(eps > Rational(0) && eps < Rational(1)))
    throw std::domain_error("subdomain_basic: eps outside (0,1)");
  const int m = B.size();
  const long iters = subdomain_iterations(eps, m);
  const long cap = subdomain_scale_cap(eps, m);
  const std::size_t start = o.count();

  struct Probe {
    int a_ord;
    int h_ord;
  };
  std::vector<Probe> plan;
  plan.reserve(static_cast<std::size_t>(iters));
  for (long t = 0; t < iters; ++t) {
    const int u = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(m - 1)));
    const long k = static_cast<long>(rng.below(static_cast<std::uint64_t>(cap + 1)));
    const bool up = rng.coin();
    plan.push_back({u, detail::hub_order(u, k, m, up)});
  }
  for (const Probe& pr : plan) {
    o.query(B.point_at(pr.a_ord));
    o.query(B.point_at(pr.a_ord + 1));
    o.query(B.point_at(pr.h_ord));
    o.query(B.point_at(pr.h_ord + 1));
  }
  for (const Probe& pr : plan) {
    const std::vector<int> pts = {B.point_at(pr.a_ord), B.point_at(pr.a_ord + 1),
                                  B.point_at(pr.h_ord), B.point_at(pr.h_ord + 1)};
    if (auto tri = find_violating_triple(o.function(), pts))
      return detail::finish(o, start, Verdict::reject,
                            Witness(ViolationWitness{{(*tri)[0], (*tri)[1], (*tri)[2]}}));
  }
  return detail::finish(o, start, Verdict::accept);
}

// ---------------------------------------------------------------------------
// Parameterized basic tester: hub-set convexity check at parameter eps/32
// plus one random interval probe. Rejects eps-far functions with at most s
// distinct derivatives with probability >= eps/32.

inline long param_width(int n, const Rational& eps, int s) {
  const long w = round_half_up_to_long(eps * Rational(n) / Rational(2L * s));
  return w < 2 ? 2 : w;
}

// B = {1,2} union {i*w - 1, i*w} for i*w <= n, deduplicated
inline std::vector<int> hub_set(int n, const Rational& eps, int s) {
  const long w = param_width(n, eps, s);
  std::vector<int> pts = {1, 2};
  for (long b = w; b <= n; b += w) {
    pts.push_back(static_cast<int>(b - 1));
    pts.push_back(static_cast<int>(b));
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

namespace detail {
inline void validate_param_args(int n, const Rational& eps, int s) {
  if (n < 4) throw std::domain_error("param tester: requires n >= 4");
  if (s < 1 || s > n - 1) throw std::domain_error("param tester: requires 1 <= s <= n-1");
  if (!(eps > Rational(0) && eps < Rational(1)))
    throw std::domain_error("param tester: eps outside (0,1)");
  if (eps * Rational(n) < Rational(4L * s))
    throw std::domain_error("param tester: requires eps*n/(2s) >= 2");
}
}  // namespace detail

inline TestOutcome param_basic(CountingOracle& o, const Rational& eps, int s, Rng& rng) {
  const int n = o.n();
  detail::validate_param_args(n, eps, s);
  const std::size_t start = o.count();

  const long w = param_width(n, eps, s);
  const SubdomainView B(o.function(), hub_set(n, eps, s));
  const TestOutcome sub = subdomain_basic(o, B, eps / Rational(32), rng);

  const int x = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  const long block = x / w;
  const long y = block * w;
  int la, lb, ra, rb;
  if (block == 0) {
    la = 1;
    lb = 2;
  } else {
    la = static_cast<int>(y - 1);
    lb = static_cast<int>(y);
  }
  if (y + w > n) {
    ra = n - 1;
    rb = n;
  } else {
    ra = static_cast<int>(y - 1 + w);
    rb = static_cast<int>(y + w);
  }
  o.query(la);
  o.query(lb);
  o.query(x);
  o.query(ra);
  o.query(rb);

  if (sub.rejected()) return detail::finish(o, start, Verdict::reject, sub.witness);
  if (auto tri = find_violating_triple(o.function(), {la, lb, x, ra, rb}))
    return detail::finish(o, start, Verdict::reject,
                          Witness(ViolationWitness{{(*tri)[0], (*tri)[1], (*tri)[2]}}));
  return detail::finish(o, start, Verdict::accept);
}

inline long amplification_rounds(const Rational& eps) {
  return ceil_to_long(Rational(36) / eps);
}

// ceil(36/eps) independent executions; rejects iff any execution rejects.
// All executions always run, keeping the transcript input-independent.
inline TestOutcome param_amplified(CountingOracle& o, const Rational& eps, int s, Rng& rng) {
  detail::validate_param_args(o.n(), eps, s);
  const long rounds = amplification_rounds(eps);
  const std::size_t start = o.count();
  Verdict verdict = Verdict::accept;
  std::optional<Witness> witness;
  for (long r = 0; r < rounds; ++r) {
    TestOutcome t = param_basic(o, eps, s, rng);
    if (t.rejected() && verdict == Verdict::accept) {
      verdict = Verdict::reject;
      witness = std::move(t.witness);
    }
  }
  return detail::finish(o, start, verdict, std::move(witness));
}

// ---------------------------------------------------------------------------
// Runs a tester on two functions with identical randomness and reports
// whether the ordered query transcripts agree.
template <class Tester>
bool nonadaptivity_check(Tester&& tester, const DiscreteFunction& f, const DiscreteFunction& g,
                         std::uint64_t seed) {
  if (f.n() != g.n()) throw std::invalid_argument("nonadaptivity_check: length mismatch");
  CountingOracle of(f);
  CountingOracle og(g);
  Rng rf(seed);
  Rng rg(seed);
  const TestOutcome a = tester(of, rf);
  const TestOutcome b = tester(og, rg);
  return a.queries == b.queries;
}

}  // namespace cvx
