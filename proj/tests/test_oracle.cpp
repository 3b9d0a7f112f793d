// Exhaustive-oracle tests.  The width tables are cross-checked against an
// independent closure built here out of the plain permutation library (no
// packed words, no rank bitmaps), the class calculators against hand
// values, and the whole module against the constructive engine.
#include "pwidth/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "doctest.h"
#include "pwidth/factor.hpp"
#include "pwidth/perm.hpp"

using namespace pwidth;
using namespace pwidth::oracle;

namespace {

Permutation P(const std::string& s, int n) { return parse_perm(s, n); }

std::vector<Permutation> whole_alternating(int n) {
  std::vector<int> img(n);
  std::iota(img.begin(), img.end(), 1);
  std::vector<Permutation> out;
  do {
    Permutation g = Permutation::from_images(img);
    if (g.is_even()) out.push_back(g);
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

// plain-library closure: width of every element of A_n, by layer growth
std::map<std::string, int> reference_widths(int n, int p) {
  std::vector<Permutation> group = whole_alternating(n);
  std::vector<Permutation> gens;
  for (const Permutation& g : group)
    if (!g.is_identity() && g.is_p_element(p)) gens.push_back(g);
  std::map<std::string, int> width;
  width[Permutation::identity(n).str()] = 0;
  std::vector<Permutation> frontier{Permutation::identity(n)};
  for (int level = 1; !frontier.empty(); ++level) {
    std::vector<Permutation> next;
    for (const Permutation& f : frontier)
      for (const Permutation& h : gens) {
        Permutation e = f.then(h);
        if (width.try_emplace(e.str(), level).second) next.push_back(e);
      }
    frontier.swap(next);
  }
  return width;
}

int row_width(const WidthTable& t, const ClassId& id) {
  for (const ClassRow& row : t.rows)
    if (row.id == id) return row.width;
  REQUIRE(false);
  return -1;
}

std::uint64_t row_size(const WidthTable& t, const ClassId& id) {
  for (const ClassRow& row : t.rows)
    if (row.id == id) return row.size;
  REQUIRE(false);
  return 0;
}

}  // namespace

TEST_CASE("class arithmetic: r, splitting, predicates") {
  CHECK(class_r({3, 3, 1}) == 4);
  CHECK(class_r({9}) == 8);
  CHECK(class_r({2, 2, 1}) == 2);
  CHECK(class_r({1, 1, 1, 1, 1}) == 0);

  CHECK(splits_in_half({5}));
  CHECK(splits_in_half({9}));
  CHECK(splits_in_half({5, 3, 1}));
  CHECK(splits_in_half({5, 1}));
  CHECK_FALSE(splits_in_half({3, 1, 1}));
  CHECK_FALSE(splits_in_half({7, 2}));
  CHECK_FALSE(splits_in_half({2, 2, 1}));

  CHECK(dvir_predicate(7, {3, 3, 1}));
  CHECK_FALSE(dvir_predicate(5, {2, 2, 1}));
  CHECK_FALSE(dvir_predicate(9, {3, 1, 1, 1, 1, 1, 1}));
  CHECK_FALSE(dvir_predicate(8, {2, 2, 2, 2}));
  // the strict reading only rules out fixed-point-free products of twos
  CHECK(dvir_predicate_strict(5, {2, 2, 1}));
  CHECK_FALSE(dvir_predicate_strict(8, {2, 2, 2, 2}));
  CHECK(dvir_predicate_strict(7, {3, 3, 1}));

  CHECK(dvir_witness_k(8, 5) == 1);
  CHECK(dvir_witness_k(12, 3) == 3);
  CHECK(dvir_witness_k(5, 3) == 1);
  for (int p : {3, 5, 7, 11, 13})
    for (int n = p; n <= 400; ++n) {
      const int k = dvir_witness_k(n, p);
      REQUIRE(k >= 1);
      REQUIRE(k * p <= n);
      REQUIRE(2 * k * (p - 1) >= n - 1);
      if (k > 1) REQUIRE(2 * (k - 1) * (p - 1) < n - 1);
    }
  CHECK_THROWS_AS(dvir_witness_k(4, 5), std::invalid_argument);
  CHECK_THROWS_AS(dvir_witness_k(9, 4), std::invalid_argument);

  CHECK(sharpness_scan(3) == std::vector<int>{});
  CHECK(sharpness_scan(5) == std::vector<int>{8, 9});
  CHECK(sharpness_scan(7) == std::vector<int>{11, 12, 13});
  CHECK(sharpness_scan(11) == std::vector<int>{16, 17, 18, 19, 20, 21});
  for (int p : {3, 5, 7, 11, 13, 17})
    for (int n : sharpness_scan(p)) {
      REQUIRE(n < 2 * p);
      REQUIRE(3 * n > 4 * p + 3);
    }
  CHECK_THROWS_AS(sharpness_scan(2), std::invalid_argument);
}

TEST_CASE("element classes: types, split halves, conjugation") {
  CHECK(class_of(P("(1 2 3)", 5)) == ClassId{{3, 1, 1}, 0});
  CHECK(class_of(P("", 5)) == ClassId{{1, 1, 1, 1, 1}, 0});
  CHECK(class_of(P("(1 2)(3 4)", 5)) == ClassId{{2, 2, 1}, 0});
  CHECK_THROWS_AS(class_of(P("(1 2)", 4)), std::invalid_argument);

  // the canonical 5-cycle sits in the + half by construction
  CHECK(class_of(P("(1 2 3 4 5)", 5)).split == 1);
  // conjugation by a transposition lands in the other half, by an even
  // permutation in the same half
  Permutation g = P("(1 2 3 4 5)", 5);
  Permutation odd = P("(1 2)", 5), even = P("(1 2 3)", 5);
  CHECK(class_of(odd.inverse().then(g).then(odd)).split == -1);
  CHECK(class_of(even.inverse().then(g).then(even)).split == 1);

  // halves partition their type evenly
  int plus = 0, minus = 0;
  for (const Permutation& e : whole_alternating(5)) {
    ClassId id = class_of(e);
    if (id.cycle_type == std::vector<int>{5}) (id.split > 0 ? plus : minus)++;
  }
  CHECK(plus == 12);
  CHECK(minus == 12);

  CHECK(format_class({{5, 3, 1}, 1}) == "[5 3 1]+");
  CHECK(format_class({{2, 2, 1}, 0}) == "[2 2 1]");

  // A_5 table rows in order: (5)+, (5)-, (3,1,1), (2,2,1), (1^5)
  std::vector<ClassId> cls = all_classes(5);
  REQUIRE(cls.size() == 5);
  CHECK(cls[0] == ClassId{{5}, 1});
  CHECK(cls[1] == ClassId{{5}, -1});
  CHECK(cls[2] == ClassId{{3, 1, 1}, 0});
  CHECK(cls[3] == ClassId{{2, 2, 1}, 0});
  CHECK(cls[4] == ClassId{{1, 1, 1, 1, 1}, 0});
}

TEST_CASE("exact widths match an independent closure at n = 5") {
  for (int p : {3, 5}) {
    WidthTable table = exact_widths(5, p);
    std::map<std::string, int> ref = reference_widths(5, p);
    for (const Permutation& e : whole_alternating(5)) {
      REQUIRE(ref.count(e.str()) == 1);
      REQUIRE(row_width(table, class_of(e)) == ref[e.str()]);
    }
    std::uint64_t total = 0;
    for (const ClassRow& row : table.rows) total += row.size;
    CHECK(total == 60);
    CHECK(table.group_size == 60);
  }
}

TEST_CASE("width table goldens and the degree-5 adjudication") {
  WidthTable t53 = exact_widths(5, 3);
  CHECK(t53.rows.size() == 5);
  CHECK(row_width(t53, {{1, 1, 1, 1, 1}, 0}) == 0);
  CHECK(row_width(t53, {{3, 1, 1}, 0}) == 1);
  CHECK(row_width(t53, {{2, 2, 1}, 0}) == 2);
  CHECK(row_width(t53, {{5}, 1}) == 2);
  CHECK(row_width(t53, {{5}, -1}) == 2);
  CHECK(row_size(t53, {{5}, 1}) == 12);
  CHECK(row_size(t53, {{2, 2, 1}, 0}) == 15);
  // every class fits in two 3-element factors: group width 2, closure at 2
  CHECK(t53.group_width == 2);
  CHECK(t53.layers_to_closure == 2);

  WidthTable t55 = exact_widths(5, 5);
  CHECK(row_width(t55, {{5}, 1}) == 1);
  CHECK(row_width(t55, {{5}, -1}) == 1);
  CHECK(t55.group_width <= 3);

  WidthTable t63 = exact_widths(6, 3);
  CHECK(row_width(t63, {{3, 1, 1, 1}, 0}) == 1);
  CHECK(row_width(t63, {{3, 3}, 0}) == 1);
  CHECK(t63.group_width <= 3);
}

TEST_CASE("sharpness interval has width exactly three at p = 5") {
  for (int n : sharpness_scan(5)) {
    WidthTable t = exact_widths(n, 5);
    CHECK(t.group_width == 3);
    // the direct inequality route to the same fact: 2p > n, 3(n-1) > 4p
    CHECK(2 * 5 > n);
    CHECK(3 * (n - 1) > 4 * 5);
  }
  WidthTable t85 = exact_widths(8, 5);
  CHECK(row_width(t85, {{2, 2, 2, 2}, 0}) == 3);
}

TEST_CASE("class cubes: goldens, split symmetry, validation") {
  CHECK(class_cube_covers(7, {{3, 3, 1}, 0}));
  CHECK(class_cube_covers(5, {{3, 1, 1}, 0}));
  CHECK(class_cube_covers(5, {{2, 2, 1}, 0}));
  CHECK(class_cube_covers(5, {{5}, 1}) == class_cube_covers(5, {{5}, -1}));

  CHECK_THROWS_AS(class_cube_covers(5, {{3, 1}, 0}), std::invalid_argument);
  CHECK_THROWS_AS(class_cube_covers(5, {{1, 3, 1}, 0}), std::invalid_argument);
  CHECK_THROWS_AS(class_cube_covers(4, {{2, 1, 1}, 0}), std::invalid_argument);
  CHECK_THROWS_AS(class_cube_covers(5, {{5}, 0}), std::invalid_argument);
  CHECK_THROWS_AS(class_cube_covers(5, {{3, 1, 1}, 1}), std::invalid_argument);
  CHECK_THROWS_AS(class_cube_covers(11, {{11}, 1}), ResourceCap);
  CHECK_THROWS_AS(class_cube_covers(10, {{9, 1}, 1}), ResourceCap);
}

TEST_CASE("coverage criterion holds for every qualifying class, n <= 7") {
  for (int n : {5, 6, 7})
    for (const ClassId& cls : all_classes(n))
      if (dvir_predicate(n, cls.cycle_type)) {
        INFO("n=" << n << " class " << format_class(cls));
        CHECK(class_cube_covers(n, cls));
      }
}

TEST_CASE("witness classes cube to the whole group, n <= 7") {
  for (int p : {3, 5, 7})
    for (int n = p; n <= 7; ++n) {
      if (n < 5) continue;
      const int k = dvir_witness_k(n, p);
      std::vector<int> type(k, p);
      type.resize(k + (n - k * p), 1);
      if (splits_in_half(type)) {
        CHECK(class_cube_covers(n, {type, 1}));
        CHECK(class_cube_covers(n, {type, -1}));
      } else {
        CHECK(class_cube_covers(n, {type, 0}));
      }
    }
}

TEST_CASE("oracle and engine agree at small degrees") {
  for (int n : {5, 6, 7})
    for (int p : {3, 5, 7}) {
      if (p > n) continue;
      WidthTable table = exact_widths(n, p);
      CHECK(table.group_width <= 3);
      for (const Permutation& e : whole_alternating(n)) {
        Factorization f = decompose(e, p);
        const int exact = row_width(table, class_of(e));
        REQUIRE(static_cast<int>(f.factors.size()) <= 3);
        // a certificate can never beat the exact width
        REQUIRE(static_cast<int>(f.factors.size()) >= exact);
        if (exact <= 1) REQUIRE(static_cast<int>(f.factors.size()) == exact);
      }
    }
}

TEST_CASE("worker count never changes the table") {
  WidthTable a = exact_widths(6, 3, false, 1);
  WidthTable b = exact_widths(6, 3, false, 3);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].id == b.rows[i].id);
    CHECK(a.rows[i].size == b.rows[i].size);
    CHECK(a.rows[i].width == b.rows[i].width);
  }
  CHECK(a.group_width == b.group_width);
}

TEST_CASE("caps and argument validation") {
  CHECK_THROWS_AS(exact_widths(4, 3), std::invalid_argument);
  CHECK_THROWS_AS(exact_widths(9, 2), std::invalid_argument);
  CHECK_THROWS_AS(exact_widths(9, 9), std::invalid_argument);
  CHECK_THROWS_AS(exact_widths(8, 11), std::invalid_argument);
  CHECK_THROWS_AS(exact_widths(10, 3, true), ResourceCap);
  CHECK_THROWS_AS(exact_widths(10, 5, false), ResourceCap);
  CHECK_THROWS_AS(exact_widths(11, 5, true), ResourceCap);

  REQUIRE(setenv("PWIDTH_MAX_MEM", "1000", 1) == 0);
  CHECK_THROWS_AS(exact_widths(8, 5), ResourceCap);
  CHECK_THROWS_AS(class_cube_covers(8, {{3, 3, 1, 1}, 0}), ResourceCap);
  REQUIRE(unsetenv("PWIDTH_MAX_MEM") == 0);
  CHECK(exact_widths(5, 3).group_width == 2);
}
