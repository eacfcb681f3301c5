#pragma once

// Acceptance suite: nine end-to-end checks tying the library to its
// headline guarantees (exact deciders, rejection-probability floors, query
// budgets, lift scaling). Every threshold is pinned here; the runner prints
// one PASS/FAIL line per criterion. Also reachable via `cvx verify`.

#include <chrono>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cvx/convex_distance.hpp"
#include "cvx/counting_oracle.hpp"
#include "cvx/discrete_function.hpp"
#include "cvx/generators.hpp"
#include "cvx/harness.hpp"
#include "cvx/rational.hpp"
#include "cvx/rng.hpp"
#include "cvx/testers.hpp"

namespace cvx::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

struct Check {
  long total = 0;
  long failed = 0;
  std::string first;

  void expect(bool ok, const char* what) {
    ++total;
    if (!ok) {
      ++failed;
      if (first.empty()) first = what;
    }
  }
  bool ok() const { return failed == 0; }
  std::string summary(const std::string& extra) const {
    std::ostringstream os;
    os << total << " checks";
    if (failed > 0) os << ", " << failed << " failed (first: " << first << ")";
    if (!extra.empty()) os << "; " << extra;
    return os.str();
  }
};

template <class Fn>
void grid_tables(int n, long top, Fn&& body) {
  std::vector<long> vals(static_cast<std::size_t>(n), 0);
  for (;;) {
    body(DiscreteFunction::from_ints(vals));
    int pos = 0;
    while (pos < n && vals[static_cast<std::size_t>(pos)] == top) {
      vals[static_cast<std::size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == n) break;
    ++vals[static_cast<std::size_t>(pos)];
  }
}

template <class Fn>
void binary_profiles(int n, Fn&& body) {
  for (std::uint32_t bits = 0; bits < (1u << (n - 1)); ++bits) {
    std::vector<long> vals(static_cast<std::size_t>(n), 0);
    for (int i = 1; i < n; ++i)
      vals[static_cast<std::size_t>(i)] =
          vals[static_cast<std::size_t>(i - 1)] + ((bits >> (i - 1)) & 1);
    body(DiscreteFunction::from_ints(vals));
  }
}

struct FarCampaign {
  DiscreteFunction f;
  int s;
  int distance;
  std::string tag;
};

// the six certified far instances shared by the rejection-floor criteria:
// the big half staircase plus five random far instances at n = 4096
inline const std::vector<FarCampaign>& far_campaigns() {
  static const std::vector<FarCampaign> campaigns = [] {
    std::vector<FarCampaign> cs;
    {
      DiscreteFunction f = half_staircase(4096, 2048);
      const int d = distance_to_convex(f).distance;
      cs.push_back({std::move(f), 2, d, "half-staircase-4096"});
    }
    Rng gen(0x5EED0004ull);
    const int s_list[] = {4, 16, 64, 16, 64};
    for (int s : s_list) {
      auto [f, label] = random_far(4096, s, Rational(1, 8), gen);
      cs.push_back({std::move(f), s, *label.claimed_distance,
                    "far-random-4096-s" + std::to_string(s)});
    }
    return cs;
  }();
  return campaigns;
}

}  // namespace detail

// 1. Exact distance oracle agrees with full subset enumeration, and every
//    repaired witness is convex. Zero tolerance.
inline CriterionResult c1_oracle_cross_check() {
  detail::Check ck;
  long tables = 0, profiles = 0;
  for (int n = 1; n <= 10; ++n)
    detail::grid_tables(n, 2, [&](const DiscreteFunction& f) {
      ++tables;
      const DistanceReport rep = distance_to_convex(f);
      ck.expect(rep.distance == brute_force_distance(f), "grid table: DP != brute force");
      ck.expect(is_convex(rep.repaired), "grid table: repaired witness not convex");
    });
  for (int n = 2; n <= 14; ++n)
    detail::binary_profiles(n, [&](const DiscreteFunction& f) {
      ++profiles;
      const DistanceReport rep = distance_to_convex(f);
      ck.expect(rep.distance == brute_force_distance(f), "profile: DP != brute force");
      ck.expect(is_convex(rep.repaired), "profile: repaired witness not convex");
    });
  std::ostringstream extra;
  extra << tables << " value tables over {0,1,2} (n<=10) + " << profiles
        << " binary derivative profiles (n<=14)";
  return {1, "oracle-cross-check", ck.ok(), ck.summary(extra.str())};
}

// 2. The adaptive 5-query algorithm decides convexity exactly on every
//    function with derivative profile in {0,1}^(n-1), 5 <= n <= 12.
inline CriterionResult c2_adaptive_exact() {
  detail::Check ck;
  long instances = 0;
  for (int n = 5; n <= 12; ++n)
    detail::binary_profiles(n, [&](const DiscreteFunction& f) {
      ++instances;
      CountingOracle o(f);
      const TestOutcome out = adaptive_two_deriv(o);
      ck.expect(out.queries.size() <= 5, "more than 5 queries");
      ck.expect((out.verdict == Verdict::accept) == is_convex(f), "verdict != is_convex");
    });
  return {2, "adaptive-two-deriv-exact", ck.ok(),
          ck.summary(std::to_string(instances) + " instances, always <= 5 queries")};
}

// 3. The nonadaptive 2-derivative tester accepts every convex instance and
//    rejects every oracle-certified strictly-far instance; the literal-paper
//    variant accepts the documented counterexample (regression pin).
inline CriterionResult c3_nonadaptive_two_deriv() {
  detail::Check ck;

  long convex_checked = 0;
  for (int n = 5; n <= 12; ++n) {
    const Rational eps = std::max(Rational(1, 4), Rational(2, n));
    const long budget = 4 + 2 * floor_to_long(Rational(1) / eps);
    detail::binary_profiles(n, [&](const DiscreteFunction& f) {
      if (!is_convex(f)) return;
      ++convex_checked;
      CountingOracle o(f);
      const TestOutcome out = nonadaptive_two_deriv(o, eps);
      ck.expect(out.verdict == Verdict::accept, "convex profile rejected");
      ck.expect(static_cast<long>(out.queries.size()) <= budget, "query budget exceeded");
    });
  }

  // random convex two-piece draws at n = 10^4
  Rng gen(0x5EED0003ull);
  const int big_n = 10000;
  for (int t = 0; t < 1000; ++t) {
    const Rational r1(static_cast<long>(gen.below(17)) - 8, 1 + static_cast<long>(gen.below(4)));
    const Rational r2 = r1 + Rational(static_cast<long>(gen.below(9)),
                                      1 + static_cast<long>(gen.below(4)));
    const int j = 1 + static_cast<int>(gen.below(big_n));
    const DiscreteFunction f =
        two_piece(Rational(static_cast<long>(gen.below(11)) - 5), r1, j, r2, big_n);
    const Rational eps = (t % 2 == 0) ? Rational(1, 4) : Rational(1, 8);
    CountingOracle o(f);
    const TestOutcome out = nonadaptive_two_deriv(o, eps);
    ck.expect(out.verdict == Verdict::accept, "convex two-piece rejected");
    ck.expect(static_cast<long>(out.queries.size()) <=
                  4 + 2 * floor_to_long(Rational(1) / eps),
              "two-piece query budget exceeded");
  }

  // oracle-certified far instances with exactly two derivative values
  Rng far_gen(0x5EED0033ull);
  const int far_n = 256;
  long far_checked = 0;
  for (const Rational eps : {Rational(1, 4), Rational(1, 8)}) {
    const Rational threshold = eps * Rational(far_n);
    int built = 0, attempts = 0;
    while (built < 500 && attempts < 4000) {
      ++attempts;
      std::vector<long> vals{0};
      for (int i = 1; i < far_n; ++i)
        vals.push_back(vals.back() + static_cast<long>(far_gen.below(2)));
      const DiscreteFunction f = DiscreteFunction::from_ints(vals);
      if (distinct_derivative_count(f) > 2) continue;
      const int d = distance_to_convex(f).distance;
      if (!(Rational(d) > threshold)) continue;
      ++built;
      ++far_checked;
      CountingOracle o(f);
      const TestOutcome out = nonadaptive_two_deriv(o, eps);
      ck.expect(out.verdict == Verdict::reject, "certified far instance accepted");
      ck.expect(static_cast<long>(out.queries.size()) <=
                    4 + 2 * floor_to_long(Rational(1) / eps),
                "far-instance query budget exceeded");
    }
    ck.expect(built == 500, "could not build 500 certified far instances");
  }

  // regression pin for the literal variant on the documented counterexample
  {
    std::vector<long> vals;
    for (long i = 1; i <= 10; ++i) vals.push_back(i);
    vals.push_back(10);
    for (long j = 11; j <= 19; ++j) vals.push_back(j);
    const DiscreteFunction f = DiscreteFunction::from_ints(vals);
    ck.expect(distance_to_convex(f).distance == 9, "counterexample distance changed");
    CountingOracle ol(f);
    ck.expect(nonadaptive_two_deriv(ol, Rational(1, 4), TwoDerivVariant::literal_paper).verdict ==
                  Verdict::accept,
              "literal variant no longer accepts the counterexample");
    CountingOracle of(f);
    ck.expect(nonadaptive_two_deriv(of, Rational(1, 4)).verdict == Verdict::reject,
              "fixed variant fails to reject the counterexample");
  }

  std::ostringstream extra;
  extra << convex_checked << " exhaustive convex profiles + 1000 two-piece draws accepted, "
        << far_checked << " certified far instances rejected";
  return {3, "nonadaptive-two-deriv", ck.ok(), ck.summary(extra.str())};
}

// 4. Rejection floor of the basic parameterized tester: Wilson 99% lower
//    bound of the empirical rejection rate >= eps/32 on certified far
//    instances at n = 4096, eps = 1/8, over 2*10^5 seeded trials each.
inline CriterionResult c4_param_basic_floor() {
  detail::Check ck;
  const Rational eps(1, 8);
  const Rational floor = eps / Rational(32);
  std::ostringstream extra;

  const auto& campaigns = detail::far_campaigns();
  ck.expect(campaigns.front().distance == 2047, "staircase distance != n/2 - 1");
  for (const auto& c : campaigns)
    ck.expect(Rational(c.distance) > eps * Rational(4096), "instance not strictly far");

  std::uint64_t seed = 0xC4000000ull;
  for (const auto& c : campaigns) {
    ExperimentConfig cfg;
    cfg.algo = "param";
    cfg.eps = eps;
    cfg.s = c.s;
    cfg.trials = 200000;
    cfg.master_seed = seed++;
    InstanceLabel label;
    label.claimed_distance = c.distance;
    const TrialSummary sum = run_trials_on(cfg, c.f, label);
    ck.expect(sum.wilson_low_99 >= floor, "Wilson lower bound below eps/32");
    ck.expect(sum.max_queries == query_audit("param", 4096, eps, c.s),
              "query count off the closed form");
    extra << c.tag << " rate=" << format_decimal(sum.reject_rate, 5)
          << " low=" << format_decimal(sum.wilson_low_99, 5) << "  ";
  }
  extra << "floor=" << format_decimal(floor, 5);
  return {4, "param-basic-rejection-floor", ck.ok(), ck.summary(extra.str())};
}

// 5. Amplified tester: Wilson 99% lower bound >= 0.6 on the same far
//    instances over 10^3 trials, and zero rejections across 10^4 random
//    convex instances.
inline CriterionResult c5_param_amplified() {
  detail::Check ck;
  const Rational eps(1, 8);
  std::ostringstream extra;

  std::uint64_t seed = 0xC5000000ull;
  for (const auto& c : detail::far_campaigns()) {
    ExperimentConfig cfg;
    cfg.algo = "param-amp";
    cfg.eps = eps;
    cfg.s = c.s;
    cfg.trials = 1000;
    cfg.master_seed = seed++;
    InstanceLabel label;
    label.claimed_distance = c.distance;
    const TrialSummary sum = run_trials_on(cfg, c.f, label);
    ck.expect(sum.wilson_low_99 >= Rational(3, 5), "amplified Wilson lower bound below 0.6");
    ck.expect(sum.max_queries == query_audit("param-amp", 4096, eps, c.s),
              "amplified query count off the closed form");
    extra << c.tag << " low=" << format_decimal(sum.wilson_low_99, 4) << "  ";
  }

  Rng gen(0x5EED0005ull);
  long rejections = 0, runs = 0;
  const Rational conv_eps(1, 4);
  for (int n : {64, 128, 256})
    for (int s : {1, 2, 4})
      for (int t = 0; t < 1112; ++t) {
        const DiscreteFunction f = random_convex(n, s, gen);
        CountingOracle o(f);
        Rng rng(split_seed(0xC5C0FFEEull, static_cast<std::uint64_t>(runs)));
        const TestOutcome out = param_amplified(o, conv_eps, s, rng);
        if (out.rejected()) ++rejections;
        ++runs;
      }
  ck.expect(rejections == 0, "a convex instance was rejected");
  extra << "convex-side " << runs << " runs, " << rejections << " rejections";
  return {5, "param-amplified", ck.ok(), ck.summary(extra.str())};
}

// 6. Measured query counts equal the closed forms for all algorithms across
//    the (s, eps) grid with divisible n; the parameterized count does not
//    depend on n and moves exactly as the formula when s doubles.
inline CriterionResult c6_query_budget() {
  detail::Check ck;
  const std::vector<int> s_grid = {2, 8, 64, 512};
  const std::vector<Rational> eps_grid = {Rational(1, 4), Rational(1, 8), Rational(1, 16)};

  auto measure = [&](const std::string& algo, const DiscreteFunction& f, const Rational& eps,
                     int s) {
    CountingOracle o(f);
    Rng rng(0xC6ull);
    const TestOutcome out = run_tester(algo, o, eps, s, rng);
    return static_cast<long>(out.queries.size());
  };

  for (int s : s_grid)
    for (const Rational& eps : eps_grid) {
      const long n1 = 8L * s * floor_to_long(Rational(1) / eps);
      const long n2 = 2 * n1;
      const DiscreteFunction f1 =
          two_piece(Rational(0), Rational(0), static_cast<int>(n1 / 2), Rational(1),
                    static_cast<int>(n1));
      const DiscreteFunction f2 =
          two_piece(Rational(0), Rational(0), static_cast<int>(n2 / 2), Rational(1),
                    static_cast<int>(n2));

      for (const std::string algo : {"adaptive2", "nonadaptive2", "subdomain", "param",
                                     "param-amp"}) {
        ck.expect(measure(algo, f1, eps, s) ==
                      query_audit(algo, static_cast<int>(n1), eps, s),
                  "measured != audit");
      }
      // n-independence of the parameterized budget
      ck.expect(query_audit("param-amp", static_cast<int>(n1), eps, s) ==
                    query_audit("param-amp", static_cast<int>(n2), eps, s),
                "param-amp budget depends on n");
      ck.expect(measure("param-amp", f2, eps, s) ==
                    query_audit("param-amp", static_cast<int>(n2), eps, s),
                "measured != audit at the doubled n");

      // doubling s shifts the measured count by exactly the formula increment
      const int s2 = 2 * s;
      const long n3 = 8L * s2 * floor_to_long(Rational(1) / eps);
      const DiscreteFunction f3 =
          two_piece(Rational(0), Rational(0), static_cast<int>(n3 / 2), Rational(1),
                    static_cast<int>(n3));
      const long predicted = query_audit("param-amp", static_cast<int>(n3), eps, s2) -
                             query_audit("param-amp", static_cast<int>(n1), eps, s);
      const long observed = measure("param-amp", f3, eps, s2) - measure("param-amp", f1, eps, s);
      ck.expect(observed == predicted, "s-doubling increment off the formula");
    }
  return {6, "query-budget-audit", ck.ok(),
          ck.summary("grid s in {2,8,64,512} x eps in {1/4,1/8,1/16}, divisible n")};
}

// 7. Nonadaptive testers issue input-independent query transcripts; the
//    adaptive decider does not.
inline CriterionResult c7_nonadaptivity() {
  detail::Check ck;
  Rng gen(0x5EED0007ull);
  auto random_table = [&](int n) {
    std::vector<long> vals;
    for (int i = 0; i < n; ++i) vals.push_back(static_cast<long>(gen.below(9)) - 4);
    return DiscreteFunction::from_ints(vals);
  };
  for (int t = 0; t < 100; ++t) {
    const DiscreteFunction f = random_table(64);
    const DiscreteFunction g = random_table(64);
    const std::uint64_t seed = gen.next();
    ck.expect(nonadaptivity_check(
                  [](CountingOracle& o, Rng&) {
                    return nonadaptive_two_deriv(o, Rational(1, 4));
                  },
                  f, g, seed),
              "nonadaptive2 transcript depends on values");
    ck.expect(nonadaptivity_check(
                  [](CountingOracle& o, Rng& r) {
                    const SubdomainView B = SubdomainView::full(o.function());
                    return subdomain_basic(o, B, Rational(1, 4), r);
                  },
                  f, g, seed),
              "subdomain transcript depends on values");
    ck.expect(nonadaptivity_check(
                  [](CountingOracle& o, Rng& r) { return param_basic(o, Rational(1, 4), 2, r); },
                  f, g, seed),
              "param transcript depends on values");
    ck.expect(nonadaptivity_check(
                  [](CountingOracle& o, Rng& r) {
                    return param_amplified(o, Rational(1, 2), 2, r);
                  },
                  f, g, seed),
              "param-amp transcript depends on values");
  }
  const DiscreteFunction fa = DiscreteFunction::from_ints({0, 0, 0, 1, 2, 3});
  const DiscreteFunction fb = DiscreteFunction::from_ints({0, 0, 0, 0, 1, 2});
  ck.expect(!nonadaptivity_check(
                [](CountingOracle& o, Rng&) { return adaptive_two_deriv(o); }, fa, fb, 7),
            "adaptive tester unexpectedly nonadaptive on the documented pair");
  return {7, "nonadaptivity", ck.ok(), ck.summary("100 random pairs per nonadaptive algorithm")};
}

// 8. Lift construction: convexity preserved in both directions, anchors
//    exact, distance scaled by at least k, derivative multiplicity equal.
inline CriterionResult c8_lift_properties() {
  detail::Check ck;
  long lifts = 0;
  for (int s = 3; s <= 6; ++s)
    detail::grid_tables(s, 2, [&](const DiscreteFunction& g) {
      for (int k : {2, 3}) {
        ++lifts;
        const DiscreteFunction f = lift(g, k);
        ck.expect(f.n() == s * k, "lift length");
        ck.expect(is_convex(f) == is_convex(g), "lift convexity mismatch");
        bool anchors = true;
        for (int i = 1; i <= s; ++i)
          if (f.value((i - 1) * k + 1) != g.value(i)) anchors = false;
        ck.expect(anchors, "anchor fidelity broken");
        ck.expect(distance_to_convex(f).distance >= k * distance_to_convex(g).distance,
                  "lift shrank the distance ratio");
        ck.expect(distinct_derivative_count(f) == distinct_derivative_count(g),
                  "derivative multiplicity changed");
      }
    });
  return {8, "lift-properties", ck.ok(), ck.summary(std::to_string(lifts) + " lifted instances")};
}

// 9. Calibration of the half staircase family: distance is exactly n/2 - 1.
inline CriterionResult c9_staircase_calibration() {
  detail::Check ck;
  std::ostringstream extra;
  for (int n = 8; n <= 40; n += 2) {
    const int d = distance_to_convex(half_staircase(n, n / 2)).distance;
    ck.expect(d == n / 2 - 1, "staircase distance off n/2 - 1");
  }
  return {9, "half-staircase-calibration", ck.ok(), ck.summary("even n in {8,...,40}")};
}

inline std::vector<CriterionResult> run_all(std::ostream& os) {
  using Criterion = CriterionResult (*)();
  const Criterion criteria[] = {
      c1_oracle_cross_check, c2_adaptive_exact,  c3_nonadaptive_two_deriv,
      c4_param_basic_floor,  c5_param_amplified, c6_query_budget,
      c7_nonadaptivity,      c8_lift_properties, c9_staircase_calibration,
  };
  std::vector<CriterionResult> results;
  for (const Criterion c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r = c();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    os << (r.passed ? "[PASS]" : "[FAIL]") << " criterion " << r.id << " " << r.name << ": "
       << r.detail << " (" << std::fixed << std::setprecision(1) << secs << "s)" << std::endl;
    results.push_back(std::move(r));
  }
  return results;
}

// prints one line per criterion; true iff everything passed
inline bool report(std::ostream& os) {
  const auto results = run_all(os);
  bool all = true;
  for (const auto& r : results) all = all && r.passed;
  os << (all ? "ACCEPTANCE: all criteria passed" : "ACCEPTANCE: FAILURES PRESENT") << std::endl;
  return all;
}

}  // namespace cvx::acceptance
