#pragma once
// ======================================================================
// Width engine: constructive factorization of even permutations into at
// most three factors of odd prime order p.
//
// decompose(sigma, p) cuts sigma into disjoint pieces: long odd cycles
// (length >= p), pairs of even-length cycles, and a leftover product of
// short cycles.  Each piece is rewritten as a triple of "slots", lists
// of pairwise disjoint p-cycles whose three products multiply (left to
// right) to the piece.  Slots of different pieces merge disjointly, so
// the final factors are products of at most three slot unions.  A piece
// routine may borrow letters the rest of the permutation fixes; only the
// leftover route ever borrows ambient fixed points (a weak result).
//
// Every public routine validates its own output by composition; results
// carry enough data for verify_certificate to re-check independently.
// ======================================================================

#include <string>
#include <vector>

#include "pwidth/perm.hpp"
#include "pwidth/two_cycles.hpp"

namespace pwidth {

// Cycles of sigma grouped by the role the width engine assigns them.
// paired_even holds consecutive pairs (first of each pair longer than p);
// when the number of even cycles longer than p is odd, the longest short
// even cycle is promoted to complete the last pair.
struct ClassifiedCycles {
  std::vector<Cycle> long_odd;     // odd length >= p
  std::vector<Cycle> short_odd;    // odd length < p
  std::vector<Cycle> paired_even;  // flat list of pairs
  std::vector<Cycle> short_even;   // even length < p, not promoted
};
ClassifiedCycles classify(const Permutation& sigma, int p);

// A factorization target = factors[0] * ... * factors[k-1], k <= 3, each
// factor of order exactly `prime`.  `strong` iff every factor moves only
// letters of the target.  free_letters[i] counts letters moved by
// factors[i] alone; trace records the construction routes taken.
struct Factorization {
  Permutation target;
  int prime = 0;
  std::vector<Permutation> factors;
  bool strong = true;
  std::vector<int> free_letters;
  std::vector<std::string> trace;
};

// Single odd cycle, length >= p (and odd).
Factorization decompose_long_odd(const Cycle& a, int p);

// Two disjoint even-length cycles, the longer one of length > p.
Factorization decompose_even_pair(const Cycle& b1, const Cycle& b2, int p);

// Leftover g with |mu(g)| + c*(g) <= 2p.  h is empty, one odd cycle of
// length >= p, or a pair of even-length cycles (longer first allowed in
// either order), all disjoint from g; the result factors g * prod(h).
// With h empty and |mu(g)| < p the factorization borrows p - |mu(g)|
// letters from `pool` and is weak; otherwise no ambient letters are used.
Factorization decompose_small_rest(const Permutation& g,
                                   const std::vector<Cycle>& h, int p,
                                   LetterPool& pool);

// g with every cycle shorter than p and |mu| + c* beyond the two-cycle
// bound (> 2p even / > 2p-1 odd): a subproduct of g's cycles with
// |mu| >= p that itself satisfies the bound, suitable for peeling off a
// strong pair (even) or p-cycle times (p-1)-cycle (odd).
Permutation find_reducible_sub(const Permutation& g, int p);

// Leftover g (every cycle shorter than p) with |mu(g)| + c*(g) > 2p.
Factorization decompose_large_rest(const Permutation& g, int p);

// Any even sigma of order > 1, degree >= max(p, 5).
Factorization decompose(const Permutation& sigma, int p);

// free count per factor: letters moved by that factor and no other.
std::vector<int> count_free_letters(const std::vector<Permutation>& factors);

// Re-checks a certificate from its raw data: factor count and orders,
// product, strong flag, free-letter counts.  Appends one line per
// violation to *reasons when given.
bool verify_certificate(const Factorization& f,
                        std::vector<std::string>* reasons = nullptr);

}  // namespace pwidth
