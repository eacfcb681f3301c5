#include <catch2/catch_amalgamated.hpp>

#include "cvx/convex_distance.hpp"
#include "cvx/rng.hpp"
#include "test_support.hpp"

using cvx::DiscreteFunction;
using cvx::Rational;
using cvxtest::fn;

namespace {
int hamming(const DiscreteFunction& a, const DiscreteFunction& b) {
  int d = 0;
  for (int i = 1; i <= a.n(); ++i)
    if (a.value(i) != b.value(i)) ++d;
  return d;
}

DiscreteFunction random_table(cvx::Rng& rng, int n, long top) {
  std::vector<long> vals;
  for (int i = 0; i < n; ++i) vals.push_back(static_cast<long>(rng.below(top + 1)));
  return fn(vals);
}
}  // namespace

TEST_CASE("longest_convex_subsequence on pinned instances") {
  CHECK(cvx::longest_convex_subsequence(fn({0, 0, 0, 1, 2, 3})) ==
        std::vector<int>{1, 2, 3, 4, 5, 6});
  CHECK(cvx::longest_convex_subsequence(fn({7})) == std::vector<int>{1});
  CHECK(cvx::longest_convex_subsequence(fn({3, 1})) == std::vector<int>{1, 2});

  // the half staircase at n=8: maximum size is 5
  const auto w1 = cvx::longest_convex_subsequence(fn({1, 2, 3, 4, 4, 5, 6, 7}));
  CHECK(w1.size() == 5);
  CHECK(w1 == std::vector<int>{1, 5, 6, 7, 8});

  const auto w2 = cvx::longest_convex_subsequence(fn({0, 0, 1, 1, 1, 2, 3}));
  CHECK(w2.size() == 5);
}

TEST_CASE("witness is the lexicographically smallest maximum subset") {
  const std::vector<std::vector<long>> pins = {
      {1, 2, 3, 4, 4, 5, 6, 7}, {0, 0, 1, 1, 1, 2, 3}, {0, 1, 0}, {2, 0, 1, 0, 2},
      {0, 3, 1, 2, 0, 1},       {5, 4, 3, 2, 1, 0},    {0, 1, 2, 1, 2, 3, 0},
  };
  for (const auto& vals : pins) {
    const auto f = fn(vals);
    const auto got = cvx::longest_convex_subsequence(f);
    const auto want = cvxtest::exhaustive_max_convex(f);
    CHECK(static_cast<int>(got.size()) == want.size);
    CHECK(got == want.witness);
  }
  // and exhaustively over a small grid
  cvxtest::for_each_grid_function(6, 2, [&](const DiscreteFunction& f) {
    const auto got = cvx::longest_convex_subsequence(f);
    const auto want = cvxtest::exhaustive_max_convex(f);
    REQUIRE(static_cast<int>(got.size()) == want.size);
    REQUIRE(got == want.witness);
  });
}

TEST_CASE("distance agrees with brute force on grids and random tables") {
  for (int n = 1; n <= 7; ++n) {
    cvxtest::for_each_grid_function(n, 2, [&](const DiscreteFunction& f) {
      REQUIRE(cvx::distance_to_convex(f).distance == cvx::brute_force_distance(f));
    });
  }
  cvx::Rng rng(42);
  for (int t = 0; t < 300; ++t) {
    const int n = 8 + static_cast<int>(rng.below(7));  // up to 14
    const auto f = random_table(rng, n, 3);
    REQUIRE(cvx::distance_to_convex(f).distance == cvx::brute_force_distance(f));
  }
}

TEST_CASE("fast comparator path agrees with the exact path") {
  // shifting by 1/2 and scaling by 1/3 preserves all slope comparisons but
  // forces the exact-rational comparator
  cvx::Rng rng(4242);
  for (int t = 0; t < 60; ++t) {
    const int n = 5 + static_cast<int>(rng.below(10));
    const auto f = random_table(rng, n, 4);
    std::vector<Rational> shifted;
    for (const auto& v : f.values()) shifted.push_back(v / Rational(3) + Rational(1, 2));
    const DiscreteFunction g(shifted);
    CHECK(cvx::longest_convex_subsequence(f) == cvx::longest_convex_subsequence(g));
  }
}

TEST_CASE("structured DP matches the cubic reference on larger tables") {
  cvx::Rng rng(777);
  for (int t = 0; t < 25; ++t) {
    const int n = 20 + static_cast<int>(rng.below(41));  // up to 60
    const auto f = random_table(rng, n, 6);
    CHECK(cvx::longest_convex_subsequence(f) == cvxtest::naive_lcs_cubic(f));
  }
}

TEST_CASE("distance_to_convex pinned examples") {
  CHECK(cvx::distance_to_convex(fn({1, 2, 3, 4, 4, 5, 6, 7})).distance == 3);
  CHECK(cvx::distance_to_convex(fn({0, 0, 0, 1, 2, 3})).distance == 0);
  CHECK(cvx::distance_to_convex(fn({0, 1, 0})).distance == 1);
  CHECK(cvx::distance_to_convex(fn({0, 0, 1, 1, 1, 2, 3})).distance == 2);
}

TEST_CASE("brute_force_distance pinned examples and bounds") {
  CHECK(cvx::brute_force_distance(fn({0, 1, 0})) == 1);
  CHECK(cvx::brute_force_distance(fn({1, 2, 3, 4, 4, 5, 6, 7})) == 3);
  CHECK(cvx::brute_force_distance(fn({0, 0, 1, 1, 1, 2, 3})) == 2);
  CHECK(cvx::brute_force_distance(fn({1, 1})) == 0);
  std::vector<long> big(19, 0);
  CHECK_THROWS_AS(cvx::brute_force_distance(fn(big)), std::length_error);
}

TEST_CASE("repair pinned examples") {
  CHECK(cvx::repair(fn({0, 1, 0}), {1, 3}) == fn({0, 0, 0}));

  const auto r = cvx::repair(fn({1, 2, 3, 4, 4, 5, 6, 7}), {1, 5, 6, 7, 8});
  const DiscreteFunction want({Rational(1), Rational(7, 4), Rational(10, 4), Rational(13, 4),
                               Rational(4), Rational(5), Rational(6), Rational(7)});
  CHECK(r == want);
  CHECK(cvx::is_convex(r));

  const auto convex = fn({0, 0, 0, 1, 2, 3});
  CHECK(cvx::repair(convex, {1, 2, 3, 4, 5, 6}) == convex);

  // single kept point extends as a constant
  CHECK(cvx::repair(fn({5, 9, 2}), {2}) == fn({9, 9, 9}));

  CHECK_THROWS_AS(cvx::repair(fn({0, 1, 0}), {1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(cvx::repair(fn({0, 1, 0}), {}), std::invalid_argument);
  CHECK_THROWS_AS(cvx::repair(fn({0, 1, 0}), {2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(cvx::repair(fn({0, 1, 0}), {0, 2}), std::invalid_argument);
}

TEST_CASE("repaired witness is convex and realizes the distance") {
  cvx::Rng rng(2024);
  for (int t = 0; t < 200; ++t) {
    const int n = 3 + static_cast<int>(rng.below(12));
    const auto f = random_table(rng, n, 4);
    const auto rep = cvx::distance_to_convex(f);
    CHECK(cvx::is_convex(rep.repaired));
    for (int p : rep.witness_keep) CHECK(rep.repaired.value(p) == f.value(p));
    CHECK(hamming(f, rep.repaired) == rep.distance);
    CHECK(rep.distance == f.n() - static_cast<int>(rep.witness_keep.size()));
  }
}

TEST_CASE("distance zero exactly for convex tables") {
  cvxtest::for_each_grid_function(6, 2, [&](const DiscreteFunction& f) {
    CHECK((cvx::distance_to_convex(f).distance == 0) == cvx::is_convex(f));
  });
}

TEST_CASE("appending a point never shrinks the witness") {
  cvx::Rng rng(31337);
  for (int t = 0; t < 100; ++t) {
    const int n = 4 + static_cast<int>(rng.below(8));
    const auto f = random_table(rng, n, 3);
    std::vector<Rational> ext = f.values();
    ext.emplace_back(static_cast<long>(rng.below(4)));
    const DiscreteFunction g(ext);
    CHECK(cvx::longest_convex_subsequence(g).size() >=
          cvx::longest_convex_subsequence(f).size());
  }
}
