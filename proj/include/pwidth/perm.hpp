#pragma once
// Permutations on {1..n} with an explicit ambient degree.
//
// Conventions used throughout the library:
//   * letters are 1-based integers;
//   * composition is read left to right: (f then g)(x) = g(f(x)),
//     so (1 2)(1 3) = (1 2 3);
//   * a Cycle is a list of >= 2 distinct letters in cycle order;
//   * canonical text form: every cycle rotated minimum-letter-first and
//     cycles sorted by minimum letter, e.g. "(1 2)(3 4)".
//
// Permutations of different degree never compare equal and never compose;
// embedding into a larger degree is explicit (embed).

#include <string>
#include <vector>

namespace pwidth {

using Cycle = std::vector<int>;

class Permutation {
 public:
  Permutation() = default;      // identity of degree 0
  explicit Permutation(int n);  // identity on {1..n}

  static Permutation identity(int n) { return Permutation(n); }
  // images_1based[i] = image of letter i+1; must be a bijection of {1..n}.
  static Permutation from_images(const std::vector<int>& images_1based);
  // Cycles must be pairwise disjoint, letters in [1, n], lengths >= 2.
  static Permutation from_cycles(int n, const std::vector<Cycle>& cycles);

  int degree() const { return static_cast<int>(img_.size()); }
  int apply(int x) const { return img_[x - 1] + 1; }
  int operator()(int x) const { return apply(x); }

  // Left-to-right composition: result(x) = q(this(x)).
  Permutation then(const Permutation& q) const;
  Permutation inverse() const;
  Permutation power(long long k) const;  // k may be negative
  // Same mapping viewed in degree m >= degree().
  Permutation embed(int m) const;

  bool is_identity() const;
  bool operator==(const Permutation&) const = default;

  // Non-trivial cycles, canonical rotation, sorted by minimum letter.
  std::vector<Cycle> cycles() const;
  std::vector<int> support() const;  // moved letters, ascending
  int support_size() const;
  int nontrivial_cycle_count() const;  // number of cycles of length >= 2
  std::vector<int> fixed_points() const;
  bool is_even() const;
  bool moves(int x) const { return img_[x - 1] != x - 1; }
  // lcm of cycle lengths; saturates at LLONG_MAX for huge degrees.
  long long order() const;
  // True iff this^p = identity, i.e. every cycle has length 1 or p (p prime).
  // Identity counts (convenient for "set of elements of order dividing p").
  bool is_p_element(int p) const;
  // Multiset of cycle lengths incl. fixed points as 1s, parts descending.
  std::vector<int> cycle_type() const;

  std::string str() const;  // canonical cycle notation; "()" for identity

 private:
  std::vector<int> img_;  // 0-based internally
};

Permutation compose(const Permutation& p, const Permutation& q);

// ---- cycle helpers ----
Cycle canonical_rotation(Cycle c);
std::string format_cycle(const Cycle& c);
std::string format_cycles(const std::vector<Cycle>& cs);
// Sum of cycle lengths (the cycles are assumed disjoint).
int cycles_support_size(const std::vector<Cycle>& cs);

// ---- parsing ----
// Grammar: perm := cycle* ; cycle := '(' int ((','|' ')+ int)+ ')'.
// "" and "()" denote the identity. Input cycles must be pairwise disjoint
// and letters must lie in [1, n]. Throws std::invalid_argument with a
// character position on malformed input.
Permutation parse_perm(const std::string& text, int n);

}  // namespace pwidth
