#include <catch2/catch_amalgamated.hpp>

#include "cvx/convex_distance.hpp"
#include "cvx/counting_oracle.hpp"
#include "cvx/generators.hpp"
#include "cvx/testers.hpp"
#include "test_support.hpp"

using cvx::CountingOracle;
using cvx::DiscreteFunction;
using cvx::Rational;
using cvx::Rng;
using cvx::TestOutcome;
using cvx::Verdict;
using cvxtest::fn;

namespace {
// reject outcomes must justify themselves: violation sets really violate,
// equality failures really come from non-convex inputs
void check_witness(const DiscreteFunction& f, const TestOutcome& out) {
  if (!out.rejected()) {
    CHECK_FALSE(out.witness.has_value());
    return;
  }
  REQUIRE(out.witness.has_value());
  if (const auto* v = std::get_if<cvx::ViolationWitness>(&*out.witness)) {
    CHECK(cvx::violates_convexity(f, v->points));
  } else if (cvx::distinct_derivative_count(f) <= 2) {
    // equality failures certify non-convexity only under the 2-derivative promise
    CHECK(cvx::distance_to_convex(f).distance > 0);
  }
}
}  // namespace

TEST_CASE("adaptive_two_deriv accepts the staircase with one kink") {
  const auto f = fn({0, 0, 0, 1, 2, 3});
  CountingOracle o(f);
  const auto out = cvx::adaptive_two_deriv(o);
  CHECK(out.verdict == Verdict::accept);
  CHECK(out.queries == std::vector<int>{1, 2, 5, 6, 3});  // crossing lands on j=3
}

TEST_CASE("adaptive_two_deriv rejects on a crossing-value mismatch") {
  const auto f = fn({0, 0, 1, 1, 1, 2, 3});
  CountingOracle o(f);
  const auto out = cvx::adaptive_two_deriv(o);
  CHECK(out.verdict == Verdict::reject);
  CHECK(out.queries == std::vector<int>{1, 2, 6, 7, 4});  // lines cross at j=4
  REQUIRE(out.witness.has_value());
  const auto& w = std::get<cvx::MismatchWitness>(*out.witness);
  CHECK(w.position == 4);
  CHECK(w.expected == Rational(0));
  CHECK(w.actual == Rational(1));
  check_witness(f, out);
}

TEST_CASE("adaptive_two_deriv on a linear function picks the middle") {
  const auto f = fn({0, 1, 2, 3, 4});
  CountingOracle o(f);
  const auto out = cvx::adaptive_two_deriv(o);
  CHECK(out.verdict == Verdict::accept);
  CHECK(out.queries == std::vector<int>{1, 2, 4, 5, 3});
}

TEST_CASE("adaptive_two_deriv boundary cases") {
  SECTION("parallel distinct lines reject with a violating set") {
    const auto f = fn({0, 0, 0, 1, 1});
    CountingOracle o(f);
    const auto out = cvx::adaptive_two_deriv(o);
    CHECK(out.verdict == Verdict::reject);
    check_witness(f, out);
    CHECK(std::holds_alternative<cvx::ViolationWitness>(*out.witness));
  }
  SECTION("non-integer crossing rejects") {
    const auto f = fn({0, 0, 0, 1, 3});
    CountingOracle o(f);
    const auto out = cvx::adaptive_two_deriv(o);
    CHECK(out.verdict == Verdict::reject);
    REQUIRE(out.witness.has_value());
    const auto& w = std::get<cvx::NoCrossingWitness>(*out.witness);
    CHECK(w.crossing == Rational(7, 2));
    check_witness(f, out);
  }
  SECTION("out-of-range crossing rejects") {
    const auto f = fn({0, 1, 0, 10, 12});
    CountingOracle o(f);
    const auto out = cvx::adaptive_two_deriv(o);
    CHECK(out.verdict == Verdict::reject);
    CHECK(std::holds_alternative<cvx::NoCrossingWitness>(*out.witness));
  }
  SECTION("domain error below n=5") {
    const auto f = fn({0, 1, 2, 3});
    CountingOracle o(f);
    CHECK_THROWS_AS(cvx::adaptive_two_deriv(o), std::domain_error);
  }
}

TEST_CASE("adaptive_two_deriv decides exactly on binary derivative profiles") {
  for (int n = 5; n <= 12; ++n) {
    cvxtest::for_each_binary_profile(n, [&](const DiscreteFunction& f, std::uint32_t) {
      CountingOracle o(f);
      const auto out = cvx::adaptive_two_deriv(o);
      REQUIRE(out.queries.size() <= 5);
      REQUIRE((out.verdict == Verdict::accept) == cvx::is_convex(f));
      check_witness(f, out);
    });
  }
}

TEST_CASE("nonadaptive_two_deriv accepts a convex two-piece instance") {
  const auto f = cvx::two_piece(Rational(0), Rational(0), 12, Rational(1), 20);
  CountingOracle o(f);
  const auto out = cvx::nonadaptive_two_deriv(o, Rational(1, 4));
  CHECK(out.verdict == Verdict::accept);
  // fixed plan: base points then probe pairs at 5, 10, 15, 20 (21 dropped)
  CHECK(out.queries == std::vector<int>{1, 2, 19, 20, 5, 6, 10, 11, 15, 16, 20});
}

TEST_CASE("nonadaptive_two_deriv fixed/literal split on the documented counterexample") {
  // f(i)=i up to 10, then a flat step: 0.45n-far yet consistent with the
  // literal acceptance conditions
  std::vector<long> vals;
  for (long i = 1; i <= 10; ++i) vals.push_back(i);
  vals.push_back(10);
  for (long j = 11; j <= 19; ++j) vals.push_back(j);
  const auto f = fn(vals);
  REQUIRE(cvx::distance_to_convex(f).distance == 9);  // strictly above eps*n = 5

  CountingOracle of(f);
  const auto fixed = cvx::nonadaptive_two_deriv(of, Rational(1, 4));
  CHECK(fixed.verdict == Verdict::reject);
  REQUIRE(fixed.witness.has_value());
  const auto& w = std::get<cvx::MismatchWitness>(*fixed.witness);
  CHECK(w.position == 11);
  CHECK(w.actual == Rational(10));
  CHECK(w.expected == Rational(11));

  CountingOracle ol(f);
  const auto literal =
      cvx::nonadaptive_two_deriv(ol, Rational(1, 4), cvx::TwoDerivVariant::literal_paper);
  CHECK(literal.verdict == Verdict::accept);
  CHECK(literal.queries == of.transcript());  // same fixed plan
}

TEST_CASE("nonadaptive_two_deriv rejects a slope descent immediately") {
  const DiscreteFunction f({Rational(0), Rational(1), Rational(3, 2), Rational(2)});
  CountingOracle o(f);
  const auto out = cvx::nonadaptive_two_deriv(o, Rational(1, 2));
  CHECK(out.verdict == Verdict::reject);
  REQUIRE(out.witness.has_value());
  CHECK(std::holds_alternative<cvx::ViolationWitness>(*out.witness));
  check_witness(f, out);
}

TEST_CASE("nonadaptive_two_deriv accepts convex binary profiles") {
  for (int n = 8; n <= 12; ++n) {
    cvxtest::for_each_binary_profile(n, [&](const DiscreteFunction& f, std::uint32_t) {
      if (!cvx::is_convex(f)) return;
      CountingOracle o(f);
      const auto out = cvx::nonadaptive_two_deriv(o, Rational(1, 4));
      CHECK(out.verdict == Verdict::accept);
    });
  }
}

TEST_CASE("nonadaptive_two_deriv rejects oracle-certified far staircases") {
  const auto f = cvx::half_staircase(16, 8);
  REQUIRE(cvx::distance_to_convex(f).distance == 7);
  CountingOracle o(f);
  CHECK(cvx::nonadaptive_two_deriv(o, Rational(1, 4)).verdict == Verdict::reject);
}

TEST_CASE("nonadaptive_two_deriv argument validation") {
  const auto f = fn({0, 1, 2, 3, 4, 5, 6, 7});
  CountingOracle o(f);
  CHECK_THROWS_AS(cvx::nonadaptive_two_deriv(o, Rational(2)), std::domain_error);
  CHECK_THROWS_AS(cvx::nonadaptive_two_deriv(o, Rational(1, 8)), std::domain_error);  // eps*n < 2
  const auto g = fn({0, 1, 2});
  CountingOracle og(g);
  CHECK_THROWS_AS(cvx::nonadaptive_two_deriv(og, Rational(1, 2)), std::domain_error);
}

TEST_CASE("hub_order selection") {
  // |B|=8, root order 3, scale 4, direction up -> hub order 4
  CHECK(cvx::detail::hub_order(3, 2, 8, true) == 4);
  CHECK(cvx::detail::hub_order(3, 2, 8, false) == 4);  // no multiple of 4 below 3: falls back up
  CHECK(cvx::detail::hub_order(5, 1, 8, false) == 4);
  CHECK(cvx::detail::hub_order(5, 1, 8, true) == 6);
  CHECK(cvx::detail::hub_order(1, 1, 8, false) == 2);  // nothing below order 1
  CHECK(cvx::detail::hub_order(7, 3, 8, true) == 7);   // order 8 clamped so h' exists
  CHECK(cvx::detail::hub_order(3, 4, 8, true) == 7);   // scale 16 exceeds |B|
}

TEST_CASE("common_hub pinned order arithmetic") {
  const auto f = fn({0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  const auto B = cvx::SubdomainView::full(f);
  {
    const auto [tx, ty] = cvx::common_hub(B, 3, 6);
    CHECK(B.order_of(tx.hub) == 4);
    CHECK(tx.scale == 4);
    CHECK(ty.hub == tx.hub);
    CHECK(tx.scale <= 2 * (6 - 3));
    CHECK(tx.members == std::array<int, 4>{3, 4, 4, 5});
    CHECK(ty.members == std::array<int, 4>{6, 7, 4, 5});
  }
  {
    const auto [tx, ty] = cvx::common_hub(B, 1, 3);
    CHECK(B.order_of(tx.hub) == 2);
    CHECK(tx.scale == 2);
  }
  {
    const auto [tx, ty] = cvx::common_hub(B, 5, 7);
    CHECK(B.order_of(tx.hub) == 6);
    CHECK(tx.scale == 2);
  }
  CHECK_THROWS_AS(cvx::common_hub(B, 3, 4), std::domain_error);

  // scale bound holds across all admissible pairs
  for (int x = 1; x <= 8; ++x)
    for (int y = x + 2; y <= 9; ++y) {
      const auto [tx, ty] = cvx::common_hub(B, x, y);
      CHECK(tx.scale <= 2 * (y - x));
      CHECK(B.order_of(tx.hub) % tx.scale == 0);
      CHECK(x <= tx.hub);
      CHECK(tx.hub <= y);
    }
}

TEST_CASE("subdomain_basic never rejects convex restrictions") {
  Rng gen(555);
  for (int t = 0; t < 40; ++t) {
    const int n = 24 + static_cast<int>(gen.below(40));
    const int s = 1 + static_cast<int>(gen.below(6));
    const auto f = cvx::random_convex(n, s, gen);
    std::vector<int> pts;
    for (int i = 1; i <= n; ++i)
      if (gen.coin()) pts.push_back(i);
    while (pts.size() < 4) pts = {1, 2, 3, 4};
    const cvx::SubdomainView B(f, pts);
    CountingOracle o(f);
    Rng rng(gen.next());
    const auto out = cvx::subdomain_basic(o, B, Rational(1, 4), rng);
    CHECK(out.verdict == Verdict::accept);
    CHECK(out.queries.size() ==
          4 * static_cast<std::size_t>(cvx::subdomain_iterations(Rational(1, 4), B.size())));
  }
}

TEST_CASE("subdomain_basic rejects a far restriction with decent frequency") {
  const auto f = cvx::half_staircase(64, 32);
  // 16 consecutive-pair points spanning the kink
  const std::vector<int> pts = {1, 2, 9, 10, 17, 18, 25, 26, 33, 34, 41, 42, 49, 50, 57, 58};
  const cvx::SubdomainView B(f, pts);
  int rejections = 0;
  const int trials = 2000;
  for (int t = 0; t < trials; ++t) {
    CountingOracle o(f);
    Rng rng(cvx::split_seed(0xABCDEF, static_cast<std::uint64_t>(t)));
    const auto out = cvx::subdomain_basic(o, B, Rational(1, 4), rng);
    if (out.rejected()) {
      ++rejections;
      check_witness(f, out);
    }
  }
  // Theorem-level floor is eps = 1/4 of the trials; leave slack for noise
  CHECK(rejections >= trials / 5);
}

TEST_CASE("subdomain_basic validates arguments") {
  const auto f = fn({0, 1, 2, 3});
  const auto B = cvx::SubdomainView(f, {1, 2, 3});
  CountingOracle o(f);
  Rng rng(1);
  CHECK_THROWS_AS(cvx::subdomain_basic(o, B, Rational(1, 4), rng), std::domain_error);
  const auto Bfull = cvx::SubdomainView::full(f);
  CHECK_THROWS_AS(cvx::subdomain_basic(o, Bfull, Rational(3, 2), rng), std::domain_error);
}

TEST_CASE("hub set construction") {
  const auto B = cvx::hub_set(64, Rational(1, 2), 2);
  CHECK(B == std::vector<int>{1, 2, 7, 8, 15, 16, 23, 24, 31, 32, 39, 40, 47, 48, 55, 56, 63, 64});
  CHECK(cvx::param_width(64, Rational(1, 2), 2) == 8);
  CHECK(cvx::param_width(4096, Rational(1, 8), 2) == 128);
  CHECK(cvx::hub_set(4096, Rational(1, 8), 2).size() == 66);
}

TEST_CASE("param_basic accepts convex inputs for every seed tried") {
  Rng gen(99);
  for (int t = 0; t < 60; ++t) {
    const int n = 64;
    const int s = 1 + static_cast<int>(gen.below(4));
    const auto f = cvx::random_convex(n, s, gen);
    CountingOracle o(f);
    Rng rng(gen.next());
    const auto out = cvx::param_basic(o, Rational(1, 2), s, rng);
    CHECK(out.verdict == Verdict::accept);
  }
}

TEST_CASE("param_basic query count equals its closed form on every run") {
  const Rational eps(1, 4);
  const int s = 2, n = 64;
  const long bsz = static_cast<long>(cvx::hub_set(n, eps, s).size());
  const long expected = 5 + 4 * cvx::subdomain_iterations(eps / Rational(32), static_cast<int>(bsz));
  const auto far = cvx::half_staircase(n, 32);
  Rng gen(3);
  const auto convex = cvx::random_convex(n, 2, gen);
  int far_rejections = 0;
  for (int t = 0; t < 200; ++t) {
    for (const auto* f : {&far, &convex}) {
      CountingOracle o(*f);
      Rng rng(cvx::split_seed(17, static_cast<std::uint64_t>(t)));
      const auto out = cvx::param_basic(o, eps, s, rng);
      CHECK(static_cast<long>(out.queries.size()) == expected);
      check_witness(*f, out);
      if (f == &far && out.rejected()) ++far_rejections;
    }
  }
  CHECK(far_rejections > 0);
}

TEST_CASE("param_basic validates arguments") {
  const auto f = cvx::half_staircase(64, 32);
  CountingOracle o(f);
  Rng rng(1);
  CHECK_THROWS_AS(cvx::param_basic(o, Rational(1, 4), 0, rng), std::domain_error);
  CHECK_THROWS_AS(cvx::param_basic(o, Rational(1, 4), 64, rng), std::domain_error);
  CHECK_THROWS_AS(cvx::param_basic(o, Rational(5, 4), 2, rng), std::domain_error);
  // eps*n/(2s) = 1 < 2
  CHECK_THROWS_AS(cvx::param_basic(o, Rational(1, 4), 8, rng), std::domain_error);
}

TEST_CASE("param_amplified rejects far instances and never convex ones") {
  const auto far = cvx::half_staircase(64, 32);
  int rejected = 0;
  const int trials = 60;
  for (int t = 0; t < trials; ++t) {
    CountingOracle o(far);
    Rng rng(cvx::split_seed(23, static_cast<std::uint64_t>(t)));
    const auto out = cvx::param_amplified(o, Rational(1, 4), 2, rng);
    if (out.rejected()) ++rejected;
    check_witness(far, out);
    // all rounds always execute
    const long per = 5 + 4 * cvx::subdomain_iterations(Rational(1, 128),
                                                       static_cast<int>(cvx::hub_set(
                                                           64, Rational(1, 4), 2).size()));
    CHECK(static_cast<long>(out.queries.size()) ==
          cvx::amplification_rounds(Rational(1, 4)) * per);
  }
  CHECK(rejected >= trials / 2);

  Rng gen(5);
  for (int t = 0; t < 25; ++t) {
    const auto f = cvx::random_convex(128, 3, gen);
    CountingOracle o(f);
    Rng rng(gen.next());
    CHECK(cvx::param_amplified(o, Rational(1, 4), 3, rng).verdict == Verdict::accept);
  }
}

TEST_CASE("identical seed and input give identical outcomes") {
  const auto f = cvx::half_staircase(128, 64);
  for (std::uint64_t seed : {1ull, 99ull, 0xF00Dull}) {
    CountingOracle o1(f), o2(f);
    Rng r1(seed), r2(seed);
    const auto a = cvx::param_basic(o1, Rational(1, 4), 2, r1);
    const auto b = cvx::param_basic(o2, Rational(1, 4), 2, r2);
    CHECK(a.verdict == b.verdict);
    CHECK(a.queries == b.queries);
  }
}

TEST_CASE("nonadaptivity of the query plans") {
  Rng gen(808);
  auto random_pair = [&](int n) {
    std::vector<long> a, b;
    for (int i = 0; i < n; ++i) {
      a.push_back(static_cast<long>(gen.below(9)) - 4);
      b.push_back(static_cast<long>(gen.below(9)) - 4);
    }
    return std::make_pair(fn(a), fn(b));
  };

  for (int t = 0; t < 30; ++t) {
    const auto [f, g] = random_pair(64);
    const std::uint64_t seed = gen.next();
    CHECK(cvx::nonadaptivity_check(
        [](CountingOracle& o, Rng&) { return cvx::nonadaptive_two_deriv(o, Rational(1, 4)); }, f,
        g, seed));
    CHECK(cvx::nonadaptivity_check(
        [](CountingOracle& o, Rng& r) {
          const auto B = cvx::SubdomainView::full(o.function());
          return cvx::subdomain_basic(o, B, Rational(1, 4), r);
        },
        f, g, seed));
    CHECK(cvx::nonadaptivity_check(
        [](CountingOracle& o, Rng& r) { return cvx::param_basic(o, Rational(1, 4), 2, r); }, f, g,
        seed));
    CHECK(cvx::nonadaptivity_check(
        [](CountingOracle& o, Rng& r) { return cvx::param_amplified(o, Rational(1, 2), 2, r); },
        f, g, seed));
  }

  // the adaptive tester places its fifth query where the interpolated lines
  // cross, which depends on the answers
  const auto f = fn({0, 0, 0, 1, 2, 3});
  const auto g = fn({0, 0, 0, 0, 1, 2});
  CHECK_FALSE(cvx::nonadaptivity_check(
      [](CountingOracle& o, Rng&) { return cvx::adaptive_two_deriv(o); }, f, g, 7));
}
