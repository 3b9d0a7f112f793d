#include "pwidth/perm.hpp"

#include <random>
#include <stdexcept>

#include "doctest.h"
#include "test_util.hpp"

using namespace pwidth;
using pwidth::testutil::random_perm;

static Permutation P(const std::string& s, int n) { return parse_perm(s, n); }

TEST_CASE("composition convention is left-to-right") {
  // This single check pins the global convention: (1 2)(1 3) = (1 2 3).
  CHECK(P("(1 2)", 3).then(P("(1 3)", 3)) == P("(1 2 3)", 3));
  CHECK(P("(1 2)", 3).then(P("(1 3)", 3)) != P("(1 3 2)", 3));
}

TEST_CASE("compose basics") {
  const auto p = P("(1 2 3)", 5);
  CHECK(compose(p, Permutation::identity(5)) == p);
  CHECK(compose(Permutation::identity(5), p) == p);
  CHECK(compose(P("(1 2 3)", 5), P("(1 4 5)", 5)) == P("(1 2 3 4 5)", 5));
  CHECK_THROWS_AS(compose(P("(1 2)", 3), P("(1 2)", 4)), std::invalid_argument);
}

TEST_CASE("inverse") {
  CHECK(P("(1 2 3)", 3).inverse() == P("(1 3 2)", 3));
  CHECK(Permutation::identity(4).inverse() == Permutation::identity(4));
  CHECK(P("(1 2)(3 4 5)", 5).inverse() == P("(1 2)(3 5 4)", 5));
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    const auto p = random_perm(17, rng);
    CHECK(p.then(p.inverse()).is_identity());
  }
}

TEST_CASE("cycles and round trip") {
  const auto p = Permutation::from_images({2, 1, 4, 3});
  CHECK(p.cycles() == std::vector<Cycle>{{1, 2}, {3, 4}});
  CHECK(Permutation::identity(6).cycles().empty());
  CHECK(format_cycles({{5, 3, 4}}) == "(3 4 5)");
  CHECK(Permutation::from_cycles(5, {{5, 3, 4}}) == P("(3 4 5)", 5));

  CHECK_THROWS_AS(Permutation::from_cycles(5, {{1, 2}, {2, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation::from_cycles(4, {{1, 5}}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation::from_cycles(4, {{3}}), std::invalid_argument);
}

TEST_CASE("round trip at scale") {
  std::mt19937_64 rng(2);
  long long fail = 0;
  for (int n = 5; n <= 100; ++n) {
    for (int t = 0; t < 100000; ++t) {
      const auto p = random_perm(n, rng);
      fail += !(Permutation::from_cycles(n, p.cycles()) == p);
    }
  }
  CHECK(fail == 0);  // counting avoids 9.6M doctest assertion records
}

TEST_CASE("stats") {
  const auto g = P("(1 2)(3 4)", 4);
  CHECK(g.support_size() == 4);
  CHECK(g.nontrivial_cycle_count() == 2);
  CHECK(g.is_even());
  CHECK(g.order() == 2);

  const auto f = P("(1 2 3 4 5)", 5);
  CHECK(f.support_size() == 5);
  CHECK(f.nontrivial_cycle_count() == 1);
  CHECK(f.is_even());
  CHECK(f.order() == 5);

  const auto h = P("(1 2 3)(4 5)", 5);
  CHECK(h.support_size() == 5);
  CHECK(h.nontrivial_cycle_count() == 2);
  CHECK(!h.is_even());
  CHECK(h.order() == 6);

  CHECK(P("(1 2)(3 4)", 5).support() == std::vector<int>{1, 2, 3, 4});
  CHECK(P("(1 2)(3 4)", 5).fixed_points() == std::vector<int>{5});
}

TEST_CASE("parity is a homomorphism") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 2000; ++t) {
    const auto p = random_perm(11, rng), q = random_perm(11, rng);
    CHECK(p.then(q).is_even() == (p.is_even() == q.is_even()));
  }
}

TEST_CASE("order matches iterated composition") {
  std::mt19937_64 rng(4);
  for (int n = 2; n <= 12; ++n) {
    for (int t = 0; t < 50; ++t) {
      const auto p = random_perm(n, rng);
      const long long o = p.order();
      Permutation acc(n);
      long long k = 0;
      do {
        acc = acc.then(p);
        ++k;
      } while (!acc.is_identity());
      CHECK(k == o);
      CHECK(p.power(o).is_identity());
    }
  }
}

TEST_CASE("p-element membership") {
  CHECK(Permutation::identity(5).is_p_element(3));
  CHECK(P("(1 2 3)(4 5 6)", 6).is_p_element(3));
  CHECK(!P("(1 2 3)(4 5)", 6).is_p_element(3));
  CHECK(P("(1 2 3 4 5)", 8).is_p_element(5));
  CHECK(!P("(1 2 3 4 5)", 8).is_p_element(3));
}

TEST_CASE("cycle type") {
  CHECK(P("(1 2)(3 4)", 5).cycle_type() == std::vector<int>{2, 2, 1});
  CHECK(Permutation::identity(4).cycle_type() == std::vector<int>{1, 1, 1, 1});
  CHECK(P("(1 2 3 4 5)", 8).cycle_type() == std::vector<int>{5, 1, 1, 1});
}

TEST_CASE("embed and degree separation") {
  const auto p = P("(1 2)", 2);
  CHECK(p.embed(4) == P("(1 2)", 4));
  CHECK(p != P("(1 2)", 3));
  CHECK_THROWS_AS(P("(1 2 3)", 3).embed(2), std::invalid_argument);
}

TEST_CASE("parsing") {
  CHECK(parse_perm("", 6) == Permutation::identity(6));
  CHECK(parse_perm("()", 6) == Permutation::identity(6));
  CHECK(parse_perm("(1 2)(3 4)", 5) == Permutation::from_cycles(5, {{1, 2}, {3, 4}}));
  CHECK(parse_perm("(1,2)(3,4)", 5) == parse_perm("(1 2)(3 4)", 5));
  CHECK(parse_perm(" (1 2 10) ", 10) == Permutation::from_cycles(10, {{1, 2, 10}}));

  CHECK_THROWS_AS(parse_perm("(1 2)(2 3)", 5), std::invalid_argument);
  CHECK_THROWS_AS(parse_perm("(1)", 5), std::invalid_argument);
  CHECK_THROWS_AS(parse_perm("(1 2", 5), std::invalid_argument);
  CHECK_THROWS_AS(parse_perm("(1 9)", 5), std::invalid_argument);
  CHECK_THROWS_AS(parse_perm("(0 1)", 5), std::invalid_argument);
  CHECK_THROWS_AS(parse_perm("1 2", 5), std::invalid_argument);
}

TEST_CASE("canonical serialization") {
  CHECK(P("(4 5)(2 1)", 5).str() == "(1 2)(4 5)");
  CHECK(Permutation::identity(3).str() == "()");
  CHECK(P("(5 3 4)", 5).str() == "(3 4 5)");
}
