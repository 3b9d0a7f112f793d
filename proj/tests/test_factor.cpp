#include "pwidth/factor.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "pwidth/perm.hpp"
#include "pwidth/two_cycles.hpp"
#include "test_util.hpp"

using namespace pwidth;
using pwidth::testutil::random_perm;

static Permutation P(const std::string& s, int n) { return parse_perm(s, n); }

static Cycle run_cycle(int from, int to) {  // (from, from+1, .., to)
  Cycle c;
  for (int x = from; x <= to; ++x) c.push_back(x);
  return c;
}

static Permutation cycles(int n, const std::vector<Cycle>& cs) {
  std::vector<Cycle> real;
  for (const Cycle& c : cs)
    if (c.size() >= 2) real.push_back(c);
  return real.empty() ? Permutation::identity(n) : Permutation::from_cycles(n, real);
}

static int total_free(const Factorization& f) {
  return std::accumulate(f.free_letters.begin(), f.free_letters.end(), 0);
}

static void check_sound(const Factorization& f) {
  std::vector<std::string> reasons;
  const bool ok = verify_certificate(f, &reasons);
  for (const std::string& r : reasons) INFO(r);
  REQUIRE(ok);
  REQUIRE(f.factors.size() <= 3);
}

TEST_CASE("classify groups cycles by role") {
  Permutation s = P("(1 2 3)(4 5 6 7)(8 9)", 9);
  ClassifiedCycles c = classify(s, 3);
  REQUIRE(c.long_odd.size() == 1);
  CHECK(c.long_odd[0] == Cycle{1, 2, 3});
  REQUIRE(c.paired_even.size() == 2);  // (8 9) promoted to complete the pair
  CHECK(c.paired_even[0] == Cycle{4, 5, 6, 7});
  CHECK(c.paired_even[1] == Cycle{8, 9});
  CHECK(c.short_odd.empty());
  CHECK(c.short_even.empty());

  // promotion picks the longest short even cycle, ties by smallest letter
  Permutation t = P("(1 2 3 4 5 6)(7 8)(9 10)(11 12 13 14)", 14);
  ClassifiedCycles ct = classify(t, 5);
  REQUIRE(ct.paired_even.size() == 2);
  CHECK(ct.paired_even[0] == Cycle{1, 2, 3, 4, 5, 6});
  CHECK(ct.paired_even[1] == Cycle{11, 12, 13, 14});
  REQUIRE(ct.short_even.size() == 2);

  CHECK_THROWS_AS(classify(s, 4), std::invalid_argument);
  CHECK_THROWS_AS(classify(s, 9), std::invalid_argument);
}

TEST_CASE("classify partition invariants over random input") {
  std::mt19937_64 rng(0xC1A551F7ull);
  for (int iter = 0; iter < 100000; ++iter) {
    const int p = (iter % 3 == 0) ? 3 : (iter % 3 == 1 ? 5 : 7);
    Permutation s = pwidth::testutil::random_even_perm(30, rng);
    ClassifiedCycles c = classify(s, p);
    REQUIRE(c.paired_even.size() % 2 == 0);
    std::size_t total = 0;
    for (const Cycle& x : c.long_odd) {
      REQUIRE(x.size() % 2 == 1);
      REQUIRE(static_cast<int>(x.size()) >= p);
      ++total;
    }
    for (const Cycle& x : c.short_odd) {
      REQUIRE(x.size() % 2 == 1);
      REQUIRE(static_cast<int>(x.size()) < p);
      ++total;
    }
    for (const Cycle& x : c.short_even) {
      REQUIRE(x.size() % 2 == 0);
      REQUIRE(static_cast<int>(x.size()) < p);
      ++total;
    }
    for (std::size_t i = 0; i + 1 < c.paired_even.size(); i += 2) {
      REQUIRE(c.paired_even[i].size() >= c.paired_even[i + 1].size());
      REQUIRE(static_cast<int>(c.paired_even[i].size()) > p);
      total += 2;
    }
    REQUIRE(total == s.cycles().size());
  }
}

TEST_CASE("long odd cycle: small shapes") {
  Factorization f = decompose_long_odd({1, 2, 3, 4, 5}, 3);
  check_sound(f);
  CHECK(f.factors.size() == 2);
  CHECK(f.strong);

  Factorization g = decompose_long_odd({3, 1, 7, 2, 9}, 5);
  check_sound(g);
  CHECK(g.factors.size() == 1);

  CHECK_THROWS_AS(decompose_long_odd({1, 2, 3, 4}, 3), std::invalid_argument);
  CHECK_THROWS_AS(decompose_long_odd({1, 2, 3}, 5), std::invalid_argument);
}

TEST_CASE("long odd cycle: row layout golden at n=47, p=5") {
  const Cycle a = run_cycle(1, 47);
  const std::vector<Cycle> row1 = {
      {1, 2, 3, 4, 5},      {13, 14, 15, 16, 47}, {20, 21, 22, 23, 46},
      {27, 28, 29, 30, 45}, {34, 35, 36, 37, 44}};
  const std::vector<Cycle> row2 = {
      {1, 6, 7, 8, 9}, {17, 18, 19, 20, 47}, {24, 25, 26, 27, 46},
      {31, 32, 33, 34, 45}};
  const std::vector<Cycle> row3 = {{1, 10, 11, 12, 13}};
  const Cycle rem = run_cycle(38, 44);

  // the four rows multiply back to the full cycle
  Permutation prod = cycles(47, row1)
                         .then(cycles(47, row2))
                         .then(cycles(47, row3))
                         .then(cycles(47, {rem}));
  CHECK(prod == cycles(47, {a}));

  // the engine reproduces row 1 verbatim and stays strong
  Factorization f = decompose_long_odd(a, 5);
  check_sound(f);
  REQUIRE(f.factors.size() == 3);
  CHECK(f.factors[0] == cycles(47, row1));
  CHECK(f.strong);
  REQUIRE(!f.trace.empty());
  CHECK(f.trace[0].find("rows") != std::string::npos);
}

TEST_CASE("long odd cycle: free-letter minimums up to length 199") {
  for (int p : {3, 5, 7, 11, 13}) {
    for (int m = p; m < 200; m += 2) {
      Factorization f = decompose_long_odd(run_cycle(1, m), p);
      check_sound(f);
      CHECK(f.strong);
      const int free = total_free(f);
      int want = 0;
      if (m >= 5 * p - 4)
        want = 2 * (p - 2);
      else if (m >= 3 * p)
        want = 2 * (p - 1);
      else if (m >= 2 * p)
        want = p - 1;
      if (free < want) {
        CAPTURE(p);
        CAPTURE(m);
        CHECK(free >= want);
      }
    }
  }
}

TEST_CASE("even pair: split golden") {
  Factorization f = decompose_even_pair({1, 2, 3, 4}, {5, 6}, 3);
  check_sound(f);
  REQUIRE(f.factors.size() == 3);
  CHECK(f.factors[0] == P("(1 2 5)", 6));
  CHECK(f.factors[1] == P("(1 6 5)", 6));
  CHECK(f.factors[2] == P("(1 3 4)", 6));
  CHECK(f.strong);
}

TEST_CASE("even pair: both-split shape keeps free letters") {
  Factorization f = decompose_even_pair({1, 2, 3, 4}, {5, 6, 7, 8}, 3);
  check_sound(f);
  CHECK(f.factors.size() == 3);
  CHECK(f.strong);
  CHECK(total_free(f) >= 2);
}

TEST_CASE("even pair: transposition gadget identity") {
  // (o1 .. o_{p-4} b2' b2 a2' a2)(a2 b2' b2 a2' o_{p-4} .. o1) as one
  // concrete p=5 instance
  CHECK(P("(6 5 3 4 2)", 6).then(P("(3 4 2 5 6)", 6)) == P("(2 3)(4 5)", 6));
}

TEST_CASE("even pair: free-letter minimums for all shapes up to 200") {
  for (int p : {3, 5, 7, 11, 13}) {
    for (int n1 = p + 1; n1 <= 200; ++n1) {
      if (n1 % 2 != 0) continue;
      for (int n2 = 2; n2 <= n1; n2 += 2) {
        Factorization f =
            decompose_even_pair(run_cycle(1, n1), run_cycle(n1 + 1, n1 + n2), p);
        check_sound(f);
        CHECK(f.strong);
        int want = 0;
        if (n2 < p)
          want = (n1 >= 2 * p) ? p - 2 : 0;
        else if (n1 <= 2 * p)
          want = p - 1;  // both in (p, 2p]
        else
          want = p - 2;
        const int free = total_free(f);
        if (free < want) {
          CAPTURE(p);
          CAPTURE(n1);
          CAPTURE(n2);
          CHECK(free >= want);
        }
      }
    }
  }
}

TEST_CASE("small rest alone: strong and weak pairs") {
  // strong: enough moved letters for two p-cycles
  {
    Permutation g = P("(1 2)(3 4)", 5);
    LetterPool pool(g.fixed_points());
    Factorization f = decompose_small_rest(g, {}, 3, pool);
    check_sound(f);
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0] == P("(1 2 3)", 5));
    CHECK(f.factors[1] == P("(1 4 3)", 5));
    CHECK(f.strong);
  }
  // weak: borrows one ambient letter, still two factors
  {
    Permutation g = P("(1 2)(3 4)", 8);
    LetterPool pool(g.fixed_points());
    Factorization f = decompose_small_rest(g, {}, 5, pool);
    check_sound(f);
    REQUIRE(f.factors.size() == 2);
    CHECK(!f.strong);
    std::vector<int> outside;
    for (const Permutation& q : f.factors)
      for (int x : q.support())
        if (!g.moves(x)) outside.push_back(x);
    std::sort(outside.begin(), outside.end());
    outside.erase(std::unique(outside.begin(), outside.end()), outside.end());
    CHECK(outside.size() == 1);  // exactly p - |mu(g)| = 1 borrowed letter
  }
  // validation
  {
    Permutation wide = P("(1 2)(3 4)(5 6)(7 8)", 8);
    LetterPool pool;
    CHECK_THROWS_AS(decompose_small_rest(wide, {}, 3, pool), std::invalid_argument);
  }
}

TEST_CASE("small rest with helper: odd cycle donates letters") {
  Permutation g = P("(1 2)(3 4)", 11);
  LetterPool unused;
  Factorization f = decompose_small_rest(g, {run_cycle(5, 11)}, 7, unused);
  check_sound(f);
  REQUIRE(f.factors.size() == 3);
  CHECK(f.strong);
  for (const Permutation& q : f.factors)
    for (int x : q.support()) CHECK(x <= 11);

  // helper shapes outside the contract are rejected
  Permutation g2 = P("(1 2)(3 4)", 12);
  CHECK_THROWS_AS(decompose_small_rest(g2, {{5, 6, 7, 8}}, 7, unused),
                  std::invalid_argument);
  CHECK_THROWS_AS(decompose_small_rest(g2, {{4, 5, 6, 7, 8, 9, 10}}, 7, unused),
                  std::invalid_argument);
}

TEST_CASE("small rest with helper: shape sweep") {
  // p = 3 never needs a helper: any even rest already moves >= 3 letters
  {
    LetterPool unused;
    Permutation g = P("(1 2)(3 4)", 8);
    CHECK_THROWS_AS(decompose_small_rest(g, {{5, 6, 7, 8}}, 3, unused),
                    std::invalid_argument);
  }
  // every helper family against a two-transposition rest
  for (int p : {5, 7, 11}) {
    Permutation g = P("(1 2)(3 4)", 4);
    // odd cycle helpers of every size class
    for (int m = p; m <= 5 * p + 3; m += 2) {
      const int n = 4 + m;
      Permutation gg = g.embed(n);
      LetterPool unused;
      Factorization f = decompose_small_rest(gg, {run_cycle(5, 4 + m)}, p, unused);
      check_sound(f);
      CHECK(f.strong);
      CHECK(f.factors.size() <= 3);
    }
    // pair helpers across the route boundaries
    for (int n1 = p + 1; n1 <= 4 * p + 2; ++n1) {
      if (n1 % 2 != 0) continue;
      for (int n2 = 2; n2 <= n1; n2 += 2) {
        const int n = 4 + n1 + n2;
        Permutation gg = g.embed(n);
        LetterPool unused;
        Factorization f = decompose_small_rest(
            gg, {run_cycle(5, 4 + n1), run_cycle(5 + n1, 4 + n1 + n2)}, p, unused);
        check_sound(f);
        CHECK(f.strong);
      }
    }
  }
}

TEST_CASE("reducible subproduct selection") {
  Permutation g = P("(1 2)(3 4)(5 6)(7 8)", 8);
  CHECK(find_reducible_sub(g, 5) == P("(1 2)(3 4)(5 6)", 8));
  CHECK(find_reducible_sub(g, 3) == P("(1 2)(3 4)", 8));
  CHECK_THROWS_AS(find_reducible_sub(P("(1 2)(3 4)", 8), 3), std::invalid_argument);
  CHECK_THROWS_AS(find_reducible_sub(P("(1 2 3 4 5)(6 7)(8 9)(10 11)", 11), 3),
                  std::invalid_argument);

  // returned subproducts always meet the strong pair bounds
  std::mt19937_64 rng(0x5EED5ULL);
  for (int iter = 0; iter < 2000; ++iter) {
    const int p = (iter % 2) ? 3 : 5;
    Permutation s = random_perm(24, rng);
    std::vector<Cycle> keep;
    for (const Cycle& c : s.cycles())
      if (static_cast<int>(c.size()) < p) keep.push_back(c);
    if (keep.empty()) continue;
    Permutation g2 = cycles(24, keep);
    const int mu = g2.support_size(), cs = g2.nontrivial_cycle_count();
    if (mu + cs <= (g2.is_even() ? 2 * p : 2 * p - 1)) continue;
    Permutation sub = find_reducible_sub(g2, p);
    const int ms = sub.support_size(), ss = sub.nontrivial_cycle_count();
    CHECK(ms >= p);
    CHECK(ms + ss <= (sub.is_even() ? 2 * p : 2 * p - 1));
    // sub's cycles are a subset of g2's
    for (const Cycle& c : sub.cycles())
      CHECK(std::find(keep.begin(), keep.end(), c) != keep.end());
  }
}

TEST_CASE("large rest: transposition products") {
  Permutation g = P("(1 2)(3 4)(5 6)(7 8)", 8);
  {
    Factorization f = decompose_large_rest(g, 5);
    check_sound(f);
    CHECK(f.factors.size() == 3);
    CHECK(f.strong);
  }
  {
    Factorization f = decompose_large_rest(g, 3);
    check_sound(f);
    CHECK(f.factors.size() <= 3);
    CHECK(f.strong);
  }
  CHECK_THROWS_AS(decompose_large_rest(P("(1 2)(3 4)", 8), 3), std::invalid_argument);
  CHECK_THROWS_AS(decompose_large_rest(P("(1 2 3)(4 5 6 7 8 9)", 9), 5),
                  std::invalid_argument);
}

TEST_CASE("large rest: random short-cycle products") {
  std::mt19937_64 rng(0xB16B00B5ull);
  for (int p : {3, 5, 7, 11, 13}) {
    int done = 0;
    while (done < 200) {
      const int n = 30 + static_cast<int>(rng() % 40);
      // cut a shuffled letter sequence into cycles shorter than p
      std::vector<int> letters(n);
      std::iota(letters.begin(), letters.end(), 1);
      std::shuffle(letters.begin(), letters.end(), rng);
      std::vector<Cycle> cs;
      std::size_t at = 0;
      while (at + 2 <= letters.size()) {
        int len = 2 + static_cast<int>(rng() % (p - 1));
        if (len > static_cast<int>(letters.size() - at)) break;
        if (len >= p) len = p - 1;
        cs.emplace_back(letters.begin() + at, letters.begin() + at + len);
        at += len;
      }
      Permutation g = cycles(n, cs);
      if (!g.is_even()) {
        // drop one transposition if possible to fix parity
        bool fixed = false;
        for (std::size_t i = 0; i < cs.size() && !fixed; ++i)
          if (cs[i].size() == 2) {
            cs.erase(cs.begin() + i);
            fixed = true;
          }
        if (!fixed) continue;
        g = cycles(n, cs);
        if (!g.is_even()) continue;
      }
      if (g.support_size() + g.nontrivial_cycle_count() <= 2 * p) continue;
      Factorization f = decompose_large_rest(g, p);
      check_sound(f);
      CHECK(f.strong);
      ++done;
    }
  }
}

TEST_CASE("decompose: trivial and golden cases") {
  CHECK(decompose(Permutation::identity(6), 3).factors.empty());
  CHECK(decompose(P("(1 2 3 4 5)", 5), 5).factors.size() == 1);

  Factorization f = decompose(P("(1 2 3)(4 5 6 7)(8 9)", 9), 3);
  check_sound(f);
  REQUIRE(f.factors.size() == 3);
  CHECK(f.factors[0] == P("(1 2 3)(4 5 8)", 9));
  CHECK(f.factors[1] == P("(4 9 8)", 9));
  CHECK(f.factors[2] == P("(4 6 7)", 9));

  CHECK_THROWS_AS(decompose(P("(1 2)", 5), 3), std::invalid_argument);
  CHECK_THROWS_AS(decompose(P("(1 2 3)", 5), 2), std::invalid_argument);
  CHECK_THROWS_AS(decompose(P("(1 2 3)", 5), 9), std::invalid_argument);
  CHECK_THROWS_AS(decompose(P("(1 2 3)", 3), 5), std::invalid_argument);
}

TEST_CASE("decompose: exhaustive soundness for small degrees") {
  for (int p : {3, 5, 7}) {
    for (int n = std::max(5, p); n <= 8; ++n) {
      std::vector<int> img(n);
      std::iota(img.begin(), img.end(), 1);
      long count = 0;
      do {
        Permutation s = Permutation::from_images(img);
        if (!s.is_even()) continue;
        ++count;
        Factorization f = decompose(s, p);
        std::vector<std::string> reasons;
        if (!verify_certificate(f, &reasons) || f.factors.size() > 3) {
          CAPTURE(p);
          CAPTURE(s.str());
          for (const std::string& r : reasons) INFO(r);
          REQUIRE(false);
        }
        // factor count honesty at the bottom end
        REQUIRE(f.factors.empty() == s.is_identity());
        REQUIRE((f.factors.size() == 1) == (!s.is_identity() && s.is_p_element(p)));
      } while (std::next_permutation(img.begin(), img.end()));
      CHECK(count > 0);
    }
  }
}

TEST_CASE("free letter counts and certificate checks") {
  CHECK(count_free_letters({P("(1 2 3)", 5), P("(1 4 5)", 5)}) ==
        std::vector<int>{2, 2});
  CHECK(count_free_letters({P("(1 2 3)", 5)}) == std::vector<int>{3});
  CHECK(count_free_letters({P("(1 2 3)", 5), P("(1 3 2)", 5)}) ==
        std::vector<int>{0, 0});

  Factorization good = decompose(P("(1 2)(3 4)", 5), 3);
  CHECK(verify_certificate(good));

  Factorization swapped = good;
  std::swap(swapped.factors[0], swapped.factors[1]);
  std::vector<std::string> reasons;
  CHECK(!verify_certificate(swapped, &reasons));
  CHECK(!reasons.empty());

  Factorization wrong_order;
  wrong_order.target = P("(1 2 3)(4 5)", 5);
  wrong_order.prime = 3;
  wrong_order.factors = {P("(1 2 3)", 5), P("(4 5)", 5)};
  wrong_order.strong = true;
  wrong_order.free_letters = {3, 2};
  CHECK(!verify_certificate(wrong_order));
}
