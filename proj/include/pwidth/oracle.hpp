#pragma once
// Exhaustive ground truth at desk scale.
//
// Everything in this module is recomputed from first principles over the
// whole of A_n: elements are packed four bits per letter into one 64-bit
// word, membership sets are flat bitmaps indexed by Lehmer rank, and the
// width of every element is found by growing explicit product sets, layer
// by layer, until the group is covered.  Nothing here is shared with the
// constructive engine, so each side independently checks the other.
//
// Degrees are deliberately small.  The default cap admits n <= 9 (about
// 2*10^5 group elements); n = 10 is opt-in and only sensible for p >= 5,
// where the generator set stays moderate.  PWIDTH_MAX_MEM (bytes) further
// caps bitmap allocation.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pwidth/perm.hpp"

namespace pwidth::oracle {

// Thrown when a request exceeds the size or memory budget.
struct ResourceCap : std::runtime_error {
  explicit ResourceCap(const std::string& what) : std::runtime_error(what) {}
};

// A conjugacy class of A_n: the S_n cycle type (partition of n, parts
// descending, fixed points included as 1s) plus a half tag.  Types whose
// parts are all odd and pairwise distinct fall into two A_n-classes; the
// tag is +1 for elements conjugate to the canonical representative by an
// even permutation and -1 for the others, 0 for non-splitting types.
struct ClassId {
  std::vector<int> cycle_type;
  int split = 0;

  bool operator==(const ClassId&) const = default;
};

struct ClassRow {
  ClassId id;
  std::uint64_t size = 0;
  int width = -1;
};

// Exact p-width of every element of A_n, reported per class.
struct WidthTable {
  int n = 0;
  int p = 0;
  std::vector<ClassRow> rows;  // types lexicographically descending, + before -
  int group_width = 0;         // max width over all classes
  int layers_to_closure = 0;   // least k with (order-p set)^k = A_n
  std::uint64_t group_size = 0;
};

// ---- class arithmetic (no enumeration) ----

// sum of parts > 1 minus the number of parts > 1
int class_r(const std::vector<int>& cycle_type);
// true iff all parts are odd and pairwise distinct (the type splits in A_n)
bool splits_in_half(const std::vector<int>& cycle_type);
// product-of-three-cycles coverage criterion: the type is not a product of
// two or more transpositions (fixed points allowed) and r >= (n-1)/2
bool dvir_predicate(int n, const std::vector<int>& cycle_type);
// strict reading of the exclusion: only types with every letter moved by a
// transposition (no fixed points at all) are ruled out
bool dvir_predicate_strict(int n, const std::vector<int>& cycle_type);
// least k with kp <= n and k(p-1) >= (n-1)/2; exists for every n >= p
int dvir_witness_k(int n, int p);
// all n strictly between (4p+3)/3 and 2p, ascending (candidates for group
// width exactly 3; confirm in-cap entries against exact_widths)
std::vector<int> sharpness_scan(int p);

// ---- enumeration-backed computations ----

// Exact widths by layer growth.  Throws std::invalid_argument on bad n/p,
// ResourceCap above the size or memory budget.  workers > 1 splits the
// quadratic layer over threads; the result is identical for any count.
WidthTable exact_widths(int n, int p, bool allow_big = false, int workers = 1);

// Does {class}^3 cover all of A_n?  Exact product-set computation.
bool class_cube_covers(int n, const ClassId& cls, bool allow_big = false);

// Class of one element of A_n (degree must equal n); even input required.
ClassId class_of(const Permutation& g);
// All A_n classes in table row order.
std::vector<ClassId> all_classes(int n);

std::string format_class(const ClassId& cls);

}  // namespace pwidth::oracle
