// ============================================================================
// Ground-truth side of the library: brute force over all of A_n.
//
// The constructive engine (factor.cpp) proves widths from above by writing
// factorizations down; this file proves them exactly by enumeration, so the
// two never share code paths.  Machinery:
//
//   * an element of A_n (n <= 10) is one 64-bit word, four bits per letter,
//     nibble i holding the 0-based image of letter i;
//   * sets of elements are flat bitmaps indexed by Lehmer rank (mixed-radix
//     index of the image sequence), so membership is one bit probe;
//   * the width of every element falls out of product-set layers:
//       layer 0 = {1},  layer k = layer k-1 * {order-p elements},
//     grown explicitly; an element's width is the first layer containing it.
//     Layers 1 and 2 are materialized directly (the quadratic pass over the
//     generator list dominates the cost); from layer 3 on, the cheaper test
//     "e * h^-1 in previous layer for some generator h" peels the remnant.
//
// Cost model: the quadratic pass is |gens|^2 word compositions; n = 9 with
// p = 3 gives 5768 generators and ~33M products, well under a minute.  The
// class-cube computation is |C|^2 + |A_n| * (early-exit scan), a few minutes
// for the largest n = 9 classes.
// ============================================================================

#include "pwidth/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <map>
#include <numeric>
#include <thread>
#include <utility>

namespace pwidth::oracle {
namespace {

using Packed = std::uint64_t;

void oracle_check(bool ok, const std::string& msg) {
  if (!ok) throw std::logic_error("oracle: " + msg);
}

bool is_odd_prime(int p) {
  if (p < 3 || p % 2 == 0) return false;
  for (int d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

// ---- packed permutation words ----

int pget(Packed a, int i) { return static_cast<int>((a >> (4 * i)) & 0xF); }

Packed pack_images(const std::vector<int>& img) {
  Packed a = 0;
  for (std::size_t i = 0; i < img.size(); ++i)
    a |= static_cast<Packed>(img[i]) << (4 * i);
  return a;
}

Packed pidentity(int n) {
  Packed a = 0;
  for (int i = 0; i < n; ++i) a |= static_cast<Packed>(i) << (4 * i);
  return a;
}

// left-to-right: result(x) = b(a(x))
Packed pcompose(Packed a, Packed b, int n) {
  Packed c = 0;
  for (int i = 0; i < n; ++i)
    c |= static_cast<Packed>((b >> (4 * pget(a, i))) & 0xF) << (4 * i);
  return c;
}

Packed pinverse(Packed a, int n) {
  Packed r = 0;
  for (int i = 0; i < n; ++i) r |= static_cast<Packed>(i) << (4 * pget(a, i));
  return r;
}

// mixed-radix Lehmer index; lexicographic order of image sequences
std::uint64_t prank(Packed a, int n) {
  std::uint64_t rank = 0;
  unsigned seen = 0;
  for (int i = 0; i < n; ++i) {
    const int v = pget(a, i);
    rank = rank * (n - i) +
           std::popcount(((1u << v) - 1) & ~seen);
    seen |= 1u << v;
  }
  return rank;
}

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// parity of an image sequence: sum of Lehmer digits mod 2
bool even_images(const std::vector<int>& img) {
  const int n = static_cast<int>(img.size());
  int inv = 0;
  unsigned seen = 0;
  for (int i = 0; i < n; ++i) {
    inv += std::popcount(((1u << img[i]) - 1) & ~seen);
    seen |= 1u << img[i];
  }
  return inv % 2 == 0;
}

// cycle lengths all in {1, p} with at least one p
bool order_exactly_p(const std::vector<int>& img, int p) {
  const int n = static_cast<int>(img.size());
  unsigned seen = 0;
  bool hit = false;
  for (int s = 0; s < n; ++s) {
    if (seen & (1u << s)) continue;
    int len = 0, x = s;
    do {
      seen |= 1u << x;
      x = img[x];
      ++len;
    } while (x != s);
    if (len == p)
      hit = true;
    else if (len != 1)
      return false;
  }
  return hit;
}

std::vector<int> type_of_images(const std::vector<int>& img) {
  const int n = static_cast<int>(img.size());
  unsigned seen = 0;
  std::vector<int> parts;
  for (int s = 0; s < n; ++s) {
    if (seen & (1u << s)) continue;
    int len = 0, x = s;
    do {
      seen |= 1u << x;
      x = img[x];
      ++len;
    } while (x != s);
    parts.push_back(len);
  }
  std::sort(parts.rbegin(), parts.rend());
  return parts;
}

// Which half of a splitting type an element lies in: cycles listed longest
// first (lengths pairwise distinct for splitting types), each starting at
// its minimal letter, concatenated into one image sequence; the parity of
// that sequence is the tag.  Rotating a cycle multiplies the conjugator by
// the (even) cycle itself, so the choice of rotation does not matter.
int half_sign(const std::vector<int>& img) {
  const int n = static_cast<int>(img.size());
  unsigned seen = 0;
  std::vector<std::vector<int>> cyc;
  for (int s = 0; s < n; ++s) {
    if (seen & (1u << s)) continue;
    std::vector<int> c;
    int x = s;
    do {
      seen |= 1u << x;
      c.push_back(x);
      x = img[x];
    } while (x != s);
    cyc.push_back(std::move(c));
  }
  std::sort(cyc.begin(), cyc.end(),
            [](const auto& a, const auto& b) { return a.size() > b.size(); });
  std::vector<int> pi;
  pi.reserve(n);
  for (const auto& c : cyc) pi.insert(pi.end(), c.begin(), c.end());
  return even_images(pi) ? 1 : -1;
}

// ---- caps ----

// generous upper bound on working-set bytes for degree n
std::uint64_t bytes_estimate(int n) { return factorial(n) * 8; }

void check_caps(int n, bool allow_big, const std::string& who) {
  if (n > 10)
    throw ResourceCap(who + ": degree " + std::to_string(n) +
                      " exceeds the oracle cap (max 10)");
  if (n == 10 && !allow_big)
    throw ResourceCap(who + ": degree 10 requires the opt-in flag");
  if (const char* env = std::getenv("PWIDTH_MAX_MEM")) {
    const std::uint64_t cap = std::strtoull(env, nullptr, 10);
    if (cap > 0 && bytes_estimate(n) > cap)
      throw ResourceCap(who + ": PWIDTH_MAX_MEM=" + std::string(env) +
                        " too small (need ~" +
                        std::to_string(bytes_estimate(n)) + " bytes)");
  }
}

// ---- enumeration ----

// all even image sequences of degree n, packed, in rank order
std::vector<Packed> enumerate_even(int n) {
  std::vector<Packed> evens;
  evens.reserve(factorial(n) / 2);
  std::vector<int> img(n);
  std::iota(img.begin(), img.end(), 0);
  do {
    if (even_images(img)) evens.push_back(pack_images(img));
  } while (std::next_permutation(img.begin(), img.end()));
  return evens;
}

std::vector<int> unpack_images(Packed a, int n) {
  std::vector<int> img(n);
  for (int i = 0; i < n; ++i) img[i] = pget(a, i);
  return img;
}

ClassId class_of_images(const std::vector<int>& img) {
  ClassId id;
  id.cycle_type = type_of_images(img);
  id.split = splits_in_half(id.cycle_type) ? half_sign(img) : 0;
  return id;
}

// table row order: types lexicographically descending, + half before -
bool row_before(const ClassId& a, const ClassId& b) {
  if (a.cycle_type != b.cycle_type) return a.cycle_type > b.cycle_type;
  return a.split > b.split;
}

struct Bitmap {
  std::vector<std::uint64_t> w;
  explicit Bitmap(std::uint64_t bits) : w((bits + 63) / 64, 0) {}
  void set(std::uint64_t i) { w[i >> 6] |= 1ull << (i & 63); }
  bool test(std::uint64_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
};

}  // namespace

// ---- class arithmetic ----

int class_r(const std::vector<int>& cycle_type) {
  int r = 0;
  for (int part : cycle_type)
    if (part > 1) r += part - 1;
  return r;
}

bool splits_in_half(const std::vector<int>& cycle_type) {
  for (std::size_t i = 0; i < cycle_type.size(); ++i) {
    if (cycle_type[i] % 2 == 0) return false;
    if (i > 0 && cycle_type[i] == cycle_type[i - 1]) return false;
  }
  return true;
}

bool dvir_predicate(int n, const std::vector<int>& cycle_type) {
  int doubles = 0;
  bool bigger = false;
  for (int part : cycle_type) {
    if (part == 2) ++doubles;
    if (part > 2) bigger = true;
  }
  if (!bigger && doubles > 1) return false;
  return 2 * class_r(cycle_type) >= n - 1;
}

bool dvir_predicate_strict(int n, const std::vector<int>& cycle_type) {
  const bool pure_doubles =
      cycle_type.size() > 1 &&
      std::all_of(cycle_type.begin(), cycle_type.end(),
                  [](int part) { return part == 2; });
  if (pure_doubles) return false;
  return 2 * class_r(cycle_type) >= n - 1;
}

int dvir_witness_k(int n, int p) {
  if (!is_odd_prime(p)) throw std::invalid_argument("dvir_witness_k: p must be an odd prime");
  if (n < p) throw std::invalid_argument("dvir_witness_k: n < p");
  for (int k = 1; k * p <= n; ++k)
    if (2 * k * (p - 1) >= n - 1) return k;
  oracle_check(false, "witness exponent must exist for n >= p");
  return 0;
}

std::vector<int> sharpness_scan(int p) {
  if (!is_odd_prime(p)) throw std::invalid_argument("sharpness_scan: p must be an odd prime");
  std::vector<int> ns;
  for (int n = (4 * p + 3) / 3 + 1; n <= 2 * p - 1; ++n) ns.push_back(n);
  return ns;
}

std::string format_class(const ClassId& cls) {
  std::string out = "[";
  for (std::size_t i = 0; i < cls.cycle_type.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(cls.cycle_type[i]);
  }
  out += ']';
  if (cls.split > 0) out += '+';
  if (cls.split < 0) out += '-';
  return out;
}

// ---- exact widths ----

WidthTable exact_widths(int n, int p, bool allow_big, int workers) {
  if (n < 5) throw std::invalid_argument("exact_widths: n < 5");
  if (!is_odd_prime(p)) throw std::invalid_argument("exact_widths: p must be an odd prime");
  if (p > n) throw std::invalid_argument("exact_widths: p > n");
  if (n == 10 && p < 5)
    throw ResourceCap("exact_widths: degree 10 is supported for p >= 5 only");
  check_caps(n, allow_big, "exact_widths");
  workers = std::clamp(workers, 1, 16);

  const std::uint64_t nf = factorial(n);
  std::vector<Packed> evens = enumerate_even(n);
  std::vector<Packed> gens, gens_inv;
  {
    std::vector<int> img(n);
    for (Packed e : evens) {
      for (int i = 0; i < n; ++i) img[i] = pget(e, i);
      if (order_exactly_p(img, p)) {
        gens.push_back(e);
        gens_inv.push_back(pinverse(e, n));
      }
    }
  }
  oracle_check(!gens.empty(), "no order-p elements at this degree");

  std::vector<std::uint8_t> width(nf, 0xFF);
  width[prank(pidentity(n), n)] = 0;
  for (Packed g : gens) width[prank(g, n)] = 1;

  // layer two: all pairwise products, merged deterministically
  {
    std::vector<Bitmap> marks(workers, Bitmap(nf));
    auto run = [&](int t) {
      const std::size_t lo = gens.size() * t / workers;
      const std::size_t hi = gens.size() * (t + 1) / workers;
      Bitmap& bm = marks[t];
      for (std::size_t i = lo; i < hi; ++i)
        for (std::size_t j = 0; j < gens.size(); ++j)
          bm.set(prank(pcompose(gens[i], gens[j], n), n));
    };
    if (workers == 1) {
      run(0);
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < workers; ++t) pool.emplace_back(run, t);
      for (auto& th : pool) th.join();
      for (int t = 1; t < workers; ++t)
        for (std::size_t w = 0; w < marks[0].w.size(); ++w)
          marks[0].w[w] |= marks[t].w[w];
    }
    for (std::uint64_t w = 0; w < marks[0].w.size(); ++w) {
      std::uint64_t bits = marks[0].w[w];
      while (bits) {
        const std::uint64_t r = (w << 6) + std::countr_zero(bits);
        bits &= bits - 1;
        if (width[r] == 0xFF) width[r] = 2;
      }
    }
  }

  // layers three and beyond: peel what is left against the previous layer
  std::vector<Packed> remaining;
  for (Packed e : evens)
    if (width[prank(e, n)] == 0xFF) remaining.push_back(e);
  int level = 3;
  while (!remaining.empty()) {
    std::vector<Packed> next;
    for (Packed e : remaining) {
      bool hit = false;
      for (Packed hi : gens_inv)
        if (width[prank(pcompose(e, hi, n), n)] < level) {
          hit = true;
          break;
        }
      if (hit)
        width[prank(e, n)] = static_cast<std::uint8_t>(level);
      else
        next.push_back(e);
    }
    oracle_check(next.size() < remaining.size(),
                 "width layers stalled before covering the group");
    remaining.swap(next);
    ++level;
  }

  // fold per class; widths must be constant on every class
  std::map<std::pair<std::vector<int>, int>, ClassRow> fold;
  for (Packed e : evens) {
    const ClassId id = class_of_images(unpack_images(e, n));
    const int w = width[prank(e, n)];
    auto [it, fresh] = fold.try_emplace({id.cycle_type, id.split});
    if (fresh) {
      it->second.id = id;
      it->second.width = w;
    } else {
      oracle_check(it->second.width == w, "width not constant on a class");
    }
    ++it->second.size;
  }

  WidthTable table;
  table.n = n;
  table.p = p;
  table.group_size = evens.size();
  for (auto& [key, row] : fold) {
    table.group_width = std::max(table.group_width, row.width);
    table.rows.push_back(std::move(row));
  }
  std::sort(table.rows.begin(), table.rows.end(),
            [](const ClassRow& a, const ClassRow& b) { return row_before(a.id, b.id); });
  table.layers_to_closure = table.group_width;

  std::uint64_t total = 0;
  for (const ClassRow& row : table.rows) total += row.size;
  oracle_check(total == table.group_size, "class sizes do not add up");
  return table;
}

// ---- class cubes ----

bool class_cube_covers(int n, const ClassId& cls, bool allow_big) {
  if (n < 3) throw std::invalid_argument("class_cube_covers: n < 3");
  check_caps(n, allow_big, "class_cube_covers");
  int sum = 0, shifts = 0;
  for (std::size_t i = 0; i < cls.cycle_type.size(); ++i) {
    const int part = cls.cycle_type[i];
    if (part < 1) throw std::invalid_argument("class_cube_covers: bad part");
    if (i > 0 && part > cls.cycle_type[i - 1])
      throw std::invalid_argument("class_cube_covers: parts must descend");
    sum += part;
    shifts += part - 1;
  }
  if (sum != n) throw std::invalid_argument("class_cube_covers: parts must sum to n");
  if (shifts % 2 != 0) throw std::invalid_argument("class_cube_covers: odd class");
  if (splits_in_half(cls.cycle_type) ? cls.split * cls.split != 1 : cls.split != 0)
    throw std::invalid_argument("class_cube_covers: bad split tag");

  const std::uint64_t nf = factorial(n);
  std::vector<Packed> evens = enumerate_even(n);
  std::vector<Packed> members, members_inv;
  for (Packed e : evens) {
    const std::vector<int> img = unpack_images(e, n);
    if (type_of_images(img) != cls.cycle_type) continue;
    if (cls.split != 0 && half_sign(img) != cls.split) continue;
    members.push_back(e);
    members_inv.push_back(pinverse(e, n));
  }
  oracle_check(!members.empty(), "empty class");

  Bitmap two(nf);
  for (Packed a : members)
    for (Packed b : members) two.set(prank(pcompose(a, b, n), n));

  for (Packed e : evens) {
    bool hit = false;
    for (Packed ci : members_inv)
      if (two.test(prank(pcompose(e, ci, n), n))) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

// ---- conversions ----

ClassId class_of(const Permutation& g) {
  if (!g.is_even()) throw std::invalid_argument("class_of: odd permutation");
  const int n = g.degree();
  std::vector<int> img(n);
  for (int x = 1; x <= n; ++x) img[x - 1] = g.apply(x) - 1;
  return class_of_images(img);
}

std::vector<ClassId> all_classes(int n) {
  if (n < 1) throw std::invalid_argument("all_classes: n < 1");
  std::vector<ClassId> out;
  std::vector<int> parts;
  auto rec = [&](auto&& self, int left, int max_part) -> void {
    if (left == 0) {
      int shifts = 0;
      for (int part : parts) shifts += part - 1;
      if (shifts % 2 == 0) {
        if (splits_in_half(parts)) {
          out.push_back({parts, 1});
          out.push_back({parts, -1});
        } else {
          out.push_back({parts, 0});
        }
      }
      return;
    }
    for (int part = std::min(left, max_part); part >= 1; --part) {
      parts.push_back(part);
      self(self, left - part, part);
      parts.pop_back();
    }
  };
  rec(rec, n, n);
  std::sort(out.begin(), out.end(), row_before);
  return out;
}

}  // namespace pwidth::oracle
