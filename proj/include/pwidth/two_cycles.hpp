#pragma once
// ======================================================================
// Two-cycle decomposition factory.
//
// Constructive engines for the classical facts this library is built on:
//   * every non-identity even permutation g is a product of two l-cycles
//     exactly when (|mu(g)| + c*(g))/2 <= l <= n          (decompose_even)
//   * every odd permutation is a product of an (l+1)-cycle and an l-cycle
//     for (|mu(g)| + c*(g) - 1)/2 <= l <= n - 1           (decompose_odd)
//   * splitting a p-cycle off a longer cycle               (split_off_p_cycle)
//   * rewriting disjoint cycles as one long cycle times a
//     "fixing" cycle of first letters                      (long_plus_fixing)
//   * commuting a borrowed-letter cycle through a factor
//     it overlaps                                          (commute_through)
//
// A decomposition is *strong* when both factors move only letters of the
// target, *weak* when it borrows l - |mu(g)| spare letters from a pool;
// borrowed letters always appear as one contiguous block in both factors.
//
// The pair construction works by induction on the target's cycles:
// split the first cycle into a balanced pair sharing one anchor letter,
// then absorb each further cycle into the pair, steering the split point
// to balance the two lengths; grow to larger l by an exchange step that
// keeps supports inside mu(g); pad with pool letters beyond that. Every
// step is validated against the partial product, with a deterministic
// bounded fallback search; a validation failure after fallback is a bug
// and throws. An optional avoid-set (<= 2 letters) steers construction
// so the chosen letters stay out of one side of the output pair.
// ======================================================================

#include <stdexcept>
#include <vector>

#include "pwidth/perm.hpp"

namespace pwidth {

// Requested l is outside the decomposable range (the "only if" direction).
struct NoDecomposition : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// A weak decomposition needed more spare letters than the pool holds.
struct PoolExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ordered pool of spare letters (ambient fixed points, or free letters
// donated by already-built factors). Letters are handed out smallest-first
// and recorded; a letter is never handed out twice.
class LetterPool {
 public:
  LetterPool() = default;
  explicit LetterPool(const std::vector<int>& available);

  int take();
  std::vector<int> take(int k);
  void give(int letter);
  void give_all(const std::vector<int>& letters);
  bool contains(int letter) const;
  int size() const { return static_cast<int>(avail_.size()); }
  const std::vector<int>& consumed() const { return consumed_; }

 private:
  std::vector<int> avail_;  // ascending
  std::vector<int> consumed_;
};

struct TwoCycleResult {
  Cycle first;   // length l (even case) or l+1 (odd case)
  Cycle second;  // length l; empty means identity (odd case, l such that
                 // the second factor degenerates: single transposition, l=1)
  bool strong = false;
  std::vector<int> borrowed;  // pool letters used, ascending
};

// (|mu(g)| + c*(g)) / 2 — minimal l with g a product of two l-cycles.
// Throws std::invalid_argument on the identity or an odd permutation.
int even_pair_threshold(const Permutation& g);
// (|mu(g)| + c*(g) - 1) / 2 — odd-permutation analogue.
int odd_pair_threshold(const Permutation& g);

// g = first * second, both l-cycles. Strong iff l <= |mu(g)|.
// avoid_in_second: <= 2 letters that must not occur in `second`.
TwoCycleResult decompose_even(const Permutation& g, int l, LetterPool& pool,
                              const std::vector<int>& avoid_in_second = {});
// Same target with the avoided letters kept out of `first` instead.
TwoCycleResult decompose_even_avoid_first(const Permutation& g, int l,
                                          LetterPool& pool,
                                          const std::vector<int>& avoid_in_first);
// Weak pair that borrows exactly the given letters, placed in the given
// order (first factor reads pad_letters then the target block; the second
// factor holds them reversed). Requires |pad_letters| == l - |mu(g)|.
TwoCycleResult decompose_even_padded(const Permutation& g, int l,
                                     const std::vector<int>& pad_letters,
                                     const std::vector<int>& avoid_in_second = {});
// g odd: first an (l+1)-cycle, second an l-cycle.
TwoCycleResult decompose_odd(const Permutation& g, int l, LetterPool& pool,
                             const std::vector<int>& avoid_in_second = {});

// (o1 .. ol) = (o1 .. o_{l-p+1}) * (o1, o_{l-p+2}, .., o_l), rotated so the
// shared letter is `anchor`: returns {remainder, p-cycle} with
// remainder * p_cycle = c and the two sharing exactly {anchor}.
struct SplitOff {
  Cycle remainder;
  Cycle p_cycle;
};
SplitOff split_off_p_cycle(const Cycle& c, int p, int anchor);
// Variant with the p-cycle in front: c = p_cycle * remainder,
// p_cycle = first p letters from the anchor.
SplitOff split_off_p_cycle_front(const Cycle& c, int p, int anchor);

// Product of k >= 1 disjoint cycles rewritten as one cycle over all their
// letters (in the given order) times a k-cycle of the cycles' first letters
// in reverse order; fixing is empty (identity) when k = 1.
struct LongPlusFixing {
  Cycle long_cycle;
  Cycle fixing;
};
LongPlusFixing long_plus_fixing(const std::vector<Cycle>& cycles);
LongPlusFixing long_plus_fixing(const Permutation& g);

// y * a = a' * y' where y = (o1..ok, l1..l_{p-k}) and a = (ok..o1, m1..m_{p-k})
// share exactly the run o1..ok (reversed in a) and m1 is not moved by y.
// mu(a') = mu(a); |mu(y) ∩ mu(y')| = p - 1.
struct CommutedPair {
  Cycle a_prime;
  Cycle y_prime;
};
CommutedPair commute_through(const Cycle& y, const Cycle& a, int k);

// c*(a * b) <= |mu(a) ∩ mu(b)| for intersecting cycles a, b (test oracle;
// throws std::invalid_argument when the cycles are disjoint).
bool intersection_bound_holds(const Cycle& a, const Cycle& b);

}  // namespace pwidth
