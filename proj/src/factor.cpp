// ======================================================================
// Width engine implementation.
//
// A piece of the target is factored as a SlotTriple: three lists of
// pairwise disjoint p-cycles whose slot products, multiplied left to
// right, equal the piece.  Letters may repeat across slots but never
// inside one.  Pieces merge by slot-wise concatenation: distinct pieces
// touch disjoint letters, so the merged slot products still multiply to
// the whole target.
//
// The two_cycles pair factory supplies every two-factor decomposition;
// the routines here only decide how to cut long cycles into p-blocks,
// where a residue may borrow letters, and which cycle keeps a reserve
// run for later borrowing (the donor).
//
// Sections: slot plumbing / long odd cycles / even pairs / small
// leftover / large leftover / classification and top level /
// certificates.
// ======================================================================

#include "pwidth/factor.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pwidth {
namespace {

void engine_check(bool ok, const char* what) {
  if (!ok) throw std::logic_error(std::string("width engine: ") + what);
}

bool is_odd_prime(int p) {
  if (p < 3 || p % 2 == 0) return false;
  for (int d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

// ---- slot plumbing ----

struct Donor {
  int slot = 1;   // which slot holds the reserve cycle
  int index = 0;  // position of that cycle within the slot
  Cycle run;      // consecutive letters of that cycle, private to its slot
};

struct SlotTriple {
  std::array<std::vector<Cycle>, 3> slot;
  std::optional<Donor> donor;
  std::vector<std::string> notes;
};

int max_letter(const std::vector<Cycle>& cs) {
  int m = 1;
  for (const Cycle& c : cs)
    for (int x : c) m = std::max(m, x);
  return m;
}

Permutation cycles_perm(int n, const std::vector<Cycle>& cs) {
  std::vector<Cycle> real;
  for (const Cycle& c : cs)
    if (c.size() >= 2) real.push_back(c);
  if (real.empty()) return Permutation::identity(n);
  return Permutation::from_cycles(n, real);
}

Permutation triple_product(int n, const SlotTriple& st) {
  Permutation out = Permutation::identity(n);
  for (const auto& s : st.slot) out = out.then(cycles_perm(n, s));
  return out;
}

void verify_triple(const SlotTriple& st, const Permutation& want, const char* what) {
  engine_check(triple_product(want.degree(), st) == want, what);
}

std::vector<int> letters_of(const std::vector<Cycle>& cs) {
  std::vector<int> out;
  for (const Cycle& c : cs) out.insert(out.end(), c.begin(), c.end());
  std::sort(out.begin(), out.end());
  return out;
}

// letters appearing in slot `which` and in no other slot
std::vector<int> exclusive_letters(const SlotTriple& st, int which) {
  std::vector<int> mine = letters_of(st.slot[which]);
  std::vector<int> others;
  for (int i = 0; i < 3; ++i) {
    if (i == which) continue;
    std::vector<int> li = letters_of(st.slot[i]);
    others.insert(others.end(), li.begin(), li.end());
  }
  std::sort(others.begin(), others.end());
  std::vector<int> out;
  for (int x : mine)
    if (!std::binary_search(others.begin(), others.end(), x)) out.push_back(x);
  return out;
}

std::vector<int> minus_letters(const std::vector<int>& base,
                               const std::vector<int>& drop) {
  std::vector<int> d = drop;
  std::sort(d.begin(), d.end());
  std::vector<int> out;
  for (int x : base)
    if (!std::binary_search(d.begin(), d.end(), x)) out.push_back(x);
  return out;
}

void extend_triple(SlotTriple& dst, SlotTriple&& src) {
  if (!dst.donor && src.donor) {
    dst.donor = std::move(src.donor);
    dst.donor->index += static_cast<int>(dst.slot[dst.donor->slot].size());
  }
  for (int i = 0; i < 3; ++i)
    for (Cycle& c : src.slot[i]) dst.slot[i].push_back(std::move(c));
  for (std::string& s : src.notes) dst.notes.push_back(std::move(s));
}

Cycle rotated_to(const Cycle& c, int letter) {
  auto it = std::find(c.begin(), c.end(), letter);
  engine_check(it != c.end(), "rotation letter missing");
  Cycle out(it, c.end());
  out.insert(out.end(), c.begin(), it);
  return out;
}

// i-th p-block of a cycle's letter sequence
Cycle block_of(const Cycle& v, int i, int p) {
  return Cycle(v.begin() + i * p, v.begin() + (i + 1) * p);
}

// (v0 .. v_{N-1}) = block_0 * .. * block_{K-1} * rem with
// rem = (v0, v_p, .., v_{(K-1)p}, v_{Kp}, .., v_{N-1}); needs Kp <= N.
Cycle chain_remainder(const Cycle& v, int K, int p) {
  Cycle out;
  for (int i = 0; i < K; ++i) out.push_back(v[i * p]);
  out.insert(out.end(), v.begin() + K * p, v.end());
  return out;
}

// b = (b1, b3, b4, ..) * (b2, b3): the cycle with its second letter
// skipped, times a transposition
Cycle skip_second(const Cycle& b) {
  Cycle out;
  out.push_back(b[0]);
  out.insert(out.end(), b.begin() + 2, b.end());
  return out;
}

std::string tag(const std::string& head, const std::string& route) {
  return head + ": " + route;
}

// Strong pair for (x y) * c with |c| = p-1 and x kept out of the second
// factor.  The balanced pair motor cannot honour that constraint here (x
// pins the absorption split point away from the one exact size), so the
// pair is written down directly: first = (y, x, c_{p-1}, .., c_2) and
// second = first^{-1} * target, which closes into one p-cycle on the
// letters of the target minus x.
std::pair<Cycle, Cycle> transposition_cycle_pair(int deg, int p, int x, int y,
                                                 const Cycle& c) {
  engine_check(static_cast<int>(c.size()) == p - 1, "micro pair: bad length");
  Cycle first{y, x};
  first.insert(first.end(), c.rbegin(), c.rend() - 1);
  Permutation target = cycles_perm(deg, {Cycle{x, y}, c});
  Permutation second = cycles_perm(deg, {first}).inverse().then(target);
  engine_check(!second.moves(x), "micro pair: avoided letter in second");
  std::vector<Cycle> sc = second.cycles();
  engine_check(sc.size() == 1 && static_cast<int>(sc[0].size()) == p,
               "micro pair: second factor not a p-cycle");
  return {first, sc[0]};
}

// ---- long odd cycles ----
//
// One odd cycle a, length m >= p, as up to three slots.  Positions below
// are 1-based in a's letter sequence, which is used exactly as given:
// callers rotate first when a particular letter must end up private to
// the first slot (from 2p up, w2..wp always are).
//
//   m = p             the cycle itself
//   p < m <= 2p-1     strong pair at l = p (avoid honoured here)
//   2p <= m <= 3p-2   one p-block split off, remainder a strong pair;
//                     reserve_lead picks the front block (private run in
//                     slot 1) over the default tail block
//   3p <= m <= 4p-3   two front blocks, remainder pair avoiding w1 in
//                     its first factor
//   4p-3 < m <= 5p-5  two front blocks, mid pair, tail block back to w1
//   m >= 5p-4         three interleaved block rows plus a tail residue
//
// From 3p up the second slot starts with (w1, w_{p+1}..w_{2p-1}); its
// tail w_{p+1}..w_{2p-1} is private to that slot and reported as the
// donor reserve.
SlotTriple long_odd_slots(const Cycle& a, int p, bool reserve_lead,
                          const std::vector<int>& avoid_in_second) {
  const int m = static_cast<int>(a.size());
  engine_check(m >= p && m % 2 == 1, "long odd: bad length");
  const int deg = max_letter({a});
  const std::string head = "odd cycle len " + std::to_string(m);
  SlotTriple st;
  LetterPool none;

  if (m == p) {
    st.slot[0] = {a};
    st.notes.push_back(tag(head, "single p-cycle"));
    return st;
  }
  if (m <= 2 * p - 1) {
    TwoCycleResult r =
        decompose_even(cycles_perm(deg, {a}), p, none, avoid_in_second);
    st.slot[0] = {r.first};
    st.slot[1] = {r.second};
    st.notes.push_back(tag(head, "strong pair"));
    verify_triple(st, cycles_perm(deg, {a}), "long odd pair route");
    return st;
  }
  engine_check(avoid_in_second.empty(), "long odd: avoid beyond pair range");

  if (m <= 3 * p - 2) {
    if (reserve_lead) {
      SplitOff sp = split_off_p_cycle_front(a, p, a[0]);
      TwoCycleResult r = decompose_even(cycles_perm(deg, {sp.remainder}), p, none);
      st.slot[0] = {sp.p_cycle};
      st.slot[1] = {r.first};
      st.slot[2] = {r.second};
      st.notes.push_back(tag(head, "front block + pair"));
    } else {
      SplitOff sp = split_off_p_cycle(a, p, a[0]);
      TwoCycleResult r = decompose_even(cycles_perm(deg, {sp.remainder}), p, none);
      st.slot[0] = {r.first};
      st.slot[1] = {r.second};
      st.slot[2] = {sp.p_cycle};
      st.notes.push_back(tag(head, "tail block + pair"));
    }
    verify_triple(st, cycles_perm(deg, {a}), "long odd one-block route");
    return st;
  }

  if (m <= 4 * p - 3) {
    SplitOff s1 = split_off_p_cycle_front(a, p, a[0]);
    SplitOff s2 = split_off_p_cycle_front(s1.remainder, p, a[0]);
    TwoCycleResult r =
        decompose_even_avoid_first(cycles_perm(deg, {s2.remainder}), p, none, {a[0]});
    st.slot[0] = {s1.p_cycle};
    st.slot[1] = {s2.p_cycle, r.first};
    st.slot[2] = {r.second};
    st.donor = Donor{1, 0, Cycle(s2.p_cycle.begin() + 1, s2.p_cycle.end())};
    st.notes.push_back(tag(head, "two blocks + pair"));
    verify_triple(st, cycles_perm(deg, {a}), "long odd two-block route");
    return st;
  }

  if (m <= 5 * p - 5) {
    SplitOff s1 = split_off_p_cycle_front(a, p, a[0]);
    SplitOff s2 = split_off_p_cycle_front(s1.remainder, p, a[0]);
    const Cycle& rem2 = s2.remainder;  // (w1, w_{2p}, .., w_m)
    SplitOff s3 = split_off_p_cycle(rem2, p, rem2[1]);
    // s3.remainder = (w_{2p} .. w_{m-p+2}); s3.p_cycle closes back to w1
    TwoCycleResult r =
        decompose_even(cycles_perm(deg, {s3.remainder}), p, none, {rem2[1]});
    st.slot[0] = {s1.p_cycle};
    st.slot[1] = {s2.p_cycle, r.first};
    st.slot[2] = {r.second, s3.p_cycle};
    st.donor = Donor{1, 0, Cycle(s2.p_cycle.begin() + 1, s2.p_cycle.end())};
    st.notes.push_back(tag(head, "two blocks + pair + tail block"));
    verify_triple(st, cycles_perm(deg, {a}), "long odd tail-block route");
    return st;
  }

  // Row layout for m >= 5p-4.  Take the largest c >= 0 with
  // l = m - (3p-2) - (p-1) - c(2p-2) in [p-1, 3p-2); the three rows cover
  // positions 1..m-c-l-1 with p-blocks and the residue r sits on the last
  // l+1 positions before the row tails.
  const int over = m - (3 * p - 2);
  int c = 0;
  int l = over - (p - 1);
  while (l >= 3 * p - 2) {
    ++c;
    l -= 2 * p - 2;
  }
  engine_check(l >= p - 1, "long odd: residue underflow");
  auto w = [&](int i) { return a[i - 1]; };  // 1-based positions

  std::vector<Cycle> row1, row2;
  {
    Cycle first;
    for (int q = 1; q <= p; ++q) first.push_back(w(q));
    row1.push_back(first);
    for (int i = 0; i <= c; ++i) {
      Cycle cell;
      for (int q = (3 * p - 2) + i * (2 * p - 3); q <= (4 * p - 4) + i * (2 * p - 3); ++q)
        cell.push_back(w(q));
      cell.push_back(w(m - i));
      row1.push_back(cell);
    }
  }
  {
    Cycle first;
    first.push_back(w(1));
    for (int q = p + 1; q <= 2 * p - 1; ++q) first.push_back(w(q));
    row2.push_back(first);
    for (int i = 1; i <= c; ++i) {
      Cycle cell;
      for (int q = (4 * p - 3) + (i - 1) * (2 * p - 3);
           q <= (5 * p - 5) + (i - 1) * (2 * p - 3); ++q)
        cell.push_back(w(q));
      cell.push_back(w(m - i + 1));
      row2.push_back(cell);
    }
  }
  Cycle row3;
  row3.push_back(w(1));
  for (int q = 2 * p; q <= 3 * p - 2; ++q) row3.push_back(w(q));
  Cycle rem;
  for (int q = m - c - l; q <= m - c; ++q) rem.push_back(w(q));

  st.slot[0] = row1;
  st.slot[1] = row2;
  st.slot[2] = {row3};
  st.donor = Donor{1, 0, Cycle(row2[0].begin() + 1, row2[0].end())};

  const int sz = l + 1;
  if (sz == p) {
    st.slot[2].push_back(rem);
  } else if (sz < 2 * p) {
    TwoCycleResult r = decompose_even(cycles_perm(deg, {rem}), p, none);
    st.slot[1].push_back(r.first);
    st.slot[2].push_back(r.second);
  } else {
    SplitOff sr = split_off_p_cycle(rem, p, rem[0]);
    TwoCycleResult r = decompose_even(cycles_perm(deg, {sr.remainder}), p, none);
    st.slot[0].push_back(r.first);
    st.slot[1].push_back(r.second);
    st.slot[2].push_back(sr.p_cycle);
  }
  st.notes.push_back(tag(head, "rows, depth " + std::to_string(c)));
  verify_triple(st, cycles_perm(deg, {a}), "long odd row route");
  return st;
}

// ---- even pairs ----
//
// Two disjoint even-length cycles b1, b2 (relabelled so |b1| >= |b2|,
// |b1| > p).  Every route is strong: borrowed letters come from the
// pair's own blocks.  Routes by shape (n1 = |b1|, n2 = |b2|):
//
//   n2 < p,  n1 <= 2p-2    split b1, pool the block          (split route)
//   n2 < p,  n1 = 2p       peel the last letter; the reserve
//                          block of the base pair donates    (tail route)
//   n2 < p,  n1 <= 3p-1    two blocks + pooled residue       (block route)
//   n2 < p,  n1 >= 3p+1    rotate, reuse the long-odd rows   (rotate route)
//   both in (p, 2p]        split both, deepen length-(p+1)
//                          residues until the pair bound      (both-split)
//   n1 <= 3p-1, n2 <= 2p   front blocks, deep corner cuts    (corner route)
//   otherwise              skip-one-letter gadget            (gadget)
SlotTriple even_pair_slots(const Cycle& c1, const Cycle& c2, int p) {
  Cycle b1 = c1, b2 = c2;
  if (b1.size() < b2.size()) std::swap(b1, b2);
  const int n1 = static_cast<int>(b1.size());
  const int n2 = static_cast<int>(b2.size());
  if (n1 % 2 != 0 || n2 % 2 != 0 || n2 < 2)
    throw std::invalid_argument("decompose_even_pair: cycle lengths must be even");
  if (n1 <= p)
    throw std::invalid_argument("decompose_even_pair: longer cycle must exceed p");
  {
    std::vector<int> all = letters_of({b1, b2});
    if (std::adjacent_find(all.begin(), all.end()) != all.end())
      throw std::invalid_argument("decompose_even_pair: cycles overlap");
  }
  const int deg = max_letter({b1, b2});
  const Permutation want = cycles_perm(deg, {b1, b2});
  const std::string head =
      "pair (" + std::to_string(n1) + "," + std::to_string(n2) + ")";
  SlotTriple st;
  LetterPool none;

  if (n2 < p && n1 <= 2 * p - 2) {
    SplitOff sp = split_off_p_cycle(b1, p, b1[0]);
    LetterPool pool(minus_letters(sp.p_cycle, {b1[0]}));
    TwoCycleResult r =
        decompose_even(cycles_perm(deg, {sp.remainder, b2}), p, pool);
    st.slot[0] = {r.first};
    st.slot[1] = {r.second};
    st.slot[2] = {sp.p_cycle};
    st.notes.push_back(tag(head, "split route"));
    verify_triple(st, want, "pair split route");
    return st;
  }

  if (n2 < p && n1 == 2 * p) {
    // b1 = o * t with o the first 2p-1 letters and t a transposition; the
    // base pair of o keeps b1[0] out of its second cycle, whose tail is a
    // run of p-1 letters private to slot 2: the donor reserve.
    Cycle o(b1.begin(), b1.end() - 1);
    Cycle t{b1[0], b1.back()};
    TwoCycleResult ro = decompose_even(cycles_perm(deg, {o}), p, none, {b1[0]});
    std::vector<int> shared;
    for (int x : ro.first)
      if (std::find(ro.second.begin(), ro.second.end(), x) != ro.second.end())
        shared.push_back(x);
    engine_check(shared.size() == 1, "tail route: reserve anchor not unique");
    Cycle reserve = rotated_to(ro.second, shared[0]);
    Permutation res = cycles_perm(deg, {t, b2});
    std::vector<int> pool_letters =
        minus_letters(minus_letters(ro.first, ro.second), {b1[0]});
    LetterPool pool(pool_letters);
    TwoCycleResult r1 = decompose_even(res, p, pool);
    st.slot[0] = {ro.first};
    st.slot[1] = {reserve, r1.first};
    st.slot[2] = {r1.second};
    st.donor = Donor{1, 0, Cycle(reserve.begin() + 1, reserve.end())};
    st.notes.push_back(tag(head, "tail route"));
    verify_triple(st, want, "pair tail route");
    return st;
  }

  if (n2 < p && n1 <= 3 * p - 1) {
    Cycle P1 = block_of(b1, 0, p), P2 = block_of(b1, 1, p);
    Cycle rem2 = chain_remainder(b1, 2, p);
    const int M = static_cast<int>(rem2.size());
    if (M + n2 + 2 <= 2 * p) {
      LetterPool pool(minus_letters(P1, {b1[0]}));
      TwoCycleResult r = decompose_even(cycles_perm(deg, {rem2, b2}), p, pool);
      st.slot[0] = {P1, P2};
      st.slot[1] = {r.first};
      st.slot[2] = {r.second};
    } else {
      engine_check(M == p + 1 && n2 == p - 1, "block route: unexpected sizes");
      SplitOff dp = split_off_p_cycle(rem2, p, rem2[0]);
      auto [first, second] =
          transposition_cycle_pair(deg, p, dp.remainder[0], dp.remainder[1], b2);
      st.slot[0] = {P1, P2};
      st.slot[1] = {first};
      st.slot[2] = {second, dp.p_cycle};
    }
    st.notes.push_back(tag(head, "block route"));
    verify_triple(st, want, "pair block route");
    return st;
  }

  if (n2 < p) {
    // n1 >= 3p+1: peel the last letter, rotate the long odd remainder one
    // step so b1[0] is private to slot 1, and pool from there.
    Cycle o(b1.begin(), b1.end() - 1);
    Cycle wseq;
    wseq.push_back(o.back());
    wseq.insert(wseq.end(), o.begin(), o.end() - 1);
    SlotTriple lo = long_odd_slots(wseq, p, false, {});
    Cycle t{b1[0], b1.back()};
    Permutation res = cycles_perm(deg, {t, b2});
    std::vector<int> pool_letters = exclusive_letters(lo, 0);
    std::vector<int> moved{b1[0], b1.back()};
    moved.insert(moved.end(), b2.begin(), b2.end());
    pool_letters = minus_letters(pool_letters, moved);
    LetterPool pool(pool_letters);
    TwoCycleResult r1 = decompose_even(res, p, pool);
    st = std::move(lo);
    st.slot[1].push_back(r1.first);
    st.slot[2].push_back(r1.second);
    st.notes.push_back(tag(head, "rotate route"));
    verify_triple(st, want, "pair rotate route");
    return st;
  }

  if (n1 <= 2 * p) {
    // both in (p, 2p]: split both; residues of length p+1 are cut again
    // (a p-cycle disjoint from its block peels off) until the residues fit
    // one strong pair.
    SplitOff s1 = split_off_p_cycle(b1, p, b1[0]);
    SplitOff s2 = split_off_p_cycle(b2, p, b2[0]);
    Cycle r1 = s1.remainder, r2 = s2.remainder;
    std::vector<Cycle> pack = {s1.p_cycle, s2.p_cycle};
    auto deepen = [&](Cycle& r) {
      Cycle rot = rotated_to(r, r.back());
      SplitOff d = split_off_p_cycle(rot, p, rot[0]);
      pack.push_back(d.p_cycle);
      r = d.remainder;
    };
    while (static_cast<int>(r1.size() + r2.size()) > 2 * p - 2) {
      if (static_cast<int>(r2.size()) == p + 1) {
        deepen(r2);
      } else {
        engine_check(static_cast<int>(r1.size()) == p + 1,
                     "both-split route: nothing left to deepen");
        deepen(r1);
      }
    }
    LetterPool pool(minus_letters(s1.p_cycle, {b1[0]}));
    TwoCycleResult r = decompose_even(cycles_perm(deg, {r1, r2}), p, pool);
    st.slot[0] = {r.first};
    st.slot[1] = {r.second};
    st.slot[2] = pack;
    st.notes.push_back(tag(head, "both-split route"));
    verify_triple(st, want, "pair both-split route");
    return st;
  }

  if (n1 <= 3 * p - 1 && n2 <= 2 * p) {
    // corner route: front blocks off both cycles, deepening until one
    // strong pair covers the two residues.  The final cut of b1 shares
    // b1[0] with the first block, so that p-cycle rides in slot 3 behind
    // a residue pair told to avoid b1[0].
    std::vector<Cycle> pack;
    pack.push_back(block_of(b1, 0, p));
    SplitOff su = split_off_p_cycle_front(b2, p, b2[0]);
    pack.push_back(su.p_cycle);
    Cycle rem1 = chain_remainder(b1, 1, p);
    Cycle s2v = su.remainder;
    auto fits = [&] {
      return static_cast<int>(rem1.size() + s2v.size()) + 2 <= 2 * p;
    };
    if (!fits()) {
      pack.push_back(block_of(b1, 1, p));
      rem1 = chain_remainder(b1, 2, p);
    }
    if (!fits() && static_cast<int>(s2v.size()) == p + 1) {
      Cycle rot = rotated_to(s2v, s2v[1]);
      SplitOff d = split_off_p_cycle_front(rot, p, rot[0]);
      pack.push_back(d.p_cycle);
      s2v = d.remainder;
    }
    st.slot[0] = pack;
    if (!fits()) {
      // final cut leaves (b1[0], v) * s2v with s2v forced to length p-1;
      // b1[0] rides shared with the first block, so the residue pair must
      // keep it out of its second factor
      engine_check(static_cast<int>(rem1.size()) == p + 1,
                   "corner route: nothing left to cut");
      SplitOff d = split_off_p_cycle(rem1, p, rem1[0]);
      auto [first, second] =
          transposition_cycle_pair(deg, p, d.remainder[0], d.remainder[1], s2v);
      st.slot[1] = {first};
      st.slot[2] = {second, d.p_cycle};
    } else {
      TwoCycleResult r = decompose_even(cycles_perm(deg, {rem1, s2v}), p, none);
      engine_check(r.strong, "corner route: residue pair not strong");
      st.slot[1] = {r.first};
      st.slot[2] = {r.second};
    }
    st.notes.push_back(tag(head, "corner route"));
    verify_triple(st, want, "pair corner route");
    return st;
  }

  // gadget: write b_i = (skip-one cycle) * (transposition); the odd
  // cycles factor through the long-odd shapes with their second letters
  // private to slot 1, and the two transpositions form one pair that
  // borrows from slot 1.
  Cycle odd1 = skip_second(b1), tr1{b1[1], b1[2]};
  Cycle odd2 = skip_second(b2), tr2{b2[1], b2[2]};
  st = long_odd_slots(odd1, p, true, {});
  SlotTriple lo2;
  if (static_cast<int>(odd2.size()) == p) {
    lo2.slot[0] = {odd2};
  } else if (static_cast<int>(odd2.size()) <= 2 * p - 1) {
    lo2 = long_odd_slots(odd2, p, false, {b2[2]});
  } else {
    lo2 = long_odd_slots(odd2, p, true, {});
  }
  extend_triple(st, std::move(lo2));
  std::vector<int> pool_letters =
      minus_letters(exclusive_letters(st, 0), {b1[1], b1[2], b2[1], b2[2]});
  LetterPool pool(pool_letters);
  TwoCycleResult g12 = decompose_even(cycles_perm(deg, {tr1, tr2}), p, pool);
  st.slot[1].push_back(g12.first);
  st.slot[2].push_back(g12.second);
  st.notes.push_back(tag(head, "gadget route"));
  verify_triple(st, want, "pair gadget route");
  return st;
}

// ---- small leftover ----
//
// g with |mu| + c* <= 2p.  With no helper, one (possibly weak) pair from
// the ambient pool.  A helper piece h (odd cycle of length >= p, or an
// even pair) supplies the k = p - |mu(g)| letters g's own pair lacks:
// the helper factors first and g's pair borrows from letters private to
// one helper slot, crossing into the donor reserve when too few are.
SlotTriple small_rest_slots(const Permutation& g, const std::vector<Cycle>& h,
                            int p, LetterPool& ambient) {
  const int n = g.degree();
  const int mu = g.support_size();
  const int cs = g.nontrivial_cycle_count();
  if (g.is_identity())
    throw std::invalid_argument("decompose_small_rest: identity rest");
  if (!g.is_even())
    throw std::invalid_argument("decompose_small_rest: odd rest");
  if (mu + cs > 2 * p)
    throw std::invalid_argument("decompose_small_rest: rest too wide");
  for (const Cycle& c : h)
    for (int x : c) {
      if (x > n) throw std::invalid_argument("decompose_small_rest: helper letter beyond degree");
      if (g.moves(x)) throw std::invalid_argument("decompose_small_rest: helper overlaps rest");
    }
  SlotTriple st;
  LetterPool none;

  if (h.empty()) {
    TwoCycleResult r = decompose_even(g, p, ambient);
    st.slot[0] = {r.first};
    st.slot[1] = {r.second};
    st.notes.push_back(r.strong ? "rest: strong pair"
                                : "rest: weak pair, borrowed " +
                                      std::to_string(r.borrowed.size()));
    verify_triple(st, g, "rest pair");
    return st;
  }

  if (mu >= p)
    throw std::invalid_argument("decompose_small_rest: no helper needed");
  const int k = p - mu;

  if (h.size() == 1) {
    const Cycle& a = h[0];
    const int m = static_cast<int>(a.size());
    if (m % 2 == 0 || m < p)
      throw std::invalid_argument("decompose_small_rest: helper must be an odd cycle of length >= p");
    const Permutation want = g.then(cycles_perm(n, {a}));

    if (m >= 2 * p) {
      SlotTriple lo = long_odd_slots(a, p, true, {});
      LetterPool pool(exclusive_letters(lo, 0));
      TwoCycleResult r = decompose_even(g, p, pool);
      st = std::move(lo);
      st.slot[1].push_back(r.first);
      st.slot[2].push_back(r.second);
      st.notes.push_back("rest: pooled from long helper");
      verify_triple(st, want, "rest + long helper");
      return st;
    }
    if (m == p) {
      LetterPool pool(a);
      TwoCycleResult r = decompose_even(g, p, pool);
      st.slot[0] = {a};
      st.slot[1] = {r.first};
      st.slot[2] = {r.second};
      st.notes.push_back("rest: pooled from p-cycle helper");
      verify_triple(st, want, "rest + p-cycle helper");
      return st;
    }
    const int x = m - p;
    if (x >= k) {
      TwoCycleResult ra = decompose_even(cycles_perm(n, {a}), p, none);
      LetterPool pool(minus_letters(ra.second, ra.first));
      TwoCycleResult r = decompose_even(g, p, pool);
      st.slot[0] = {r.first};
      st.slot[1] = {r.second, ra.first};
      st.slot[2] = {ra.second};
      st.notes.push_back("rest: pooled from helper pair overhang");
      verify_triple(st, want, "rest + medium helper");
      return st;
    }
    SplitOff sp = split_off_p_cycle(a, p, a[0]);
    std::vector<Cycle> joint = g.cycles();
    joint.push_back(sp.remainder);
    Permutation wjoint = cycles_perm(n, joint);
    engine_check(wjoint.support_size() + wjoint.nontrivial_cycle_count() <= 2 * p,
                 "rest + short helper out of range");
    LetterPool pool(minus_letters(sp.p_cycle, {a[0]}));
    TwoCycleResult r = decompose_even(wjoint, p, pool);
    st.slot[0] = {r.first};
    st.slot[1] = {r.second};
    st.slot[2] = {sp.p_cycle};
    st.notes.push_back("rest: absorbed short helper remainder");
    verify_triple(st, want, "rest + short helper");
    return st;
  }

  if (h.size() != 2)
    throw std::invalid_argument("decompose_small_rest: helper must be empty, one cycle, or a pair");
  Cycle b1 = h[0], b2 = h[1];
  if (b1.size() < b2.size()) std::swap(b1, b2);
  const int n1 = static_cast<int>(b1.size());
  const int n2 = static_cast<int>(b2.size());
  const Permutation want = g.then(cycles_perm(n, {b1, b2}));

  if (n2 < p && n1 <= 2 * p - 2) {
    // split the longer cycle; its block pools for both residues
    SplitOff sp = split_off_p_cycle(b1, p, b1[0]);
    Permutation w1 = cycles_perm(n, {b2, sp.remainder});
    std::vector<int> pool_letters = minus_letters(sp.p_cycle, {b1[0]});
    if (w1.support_size() >= p) {
      TwoCycleResult r1 = decompose_even(w1, p, none);
      LetterPool pool(pool_letters);
      TwoCycleResult r2 = decompose_even(g, p, pool);
      st.slot[0] = {r2.first, r1.first};
      st.slot[1] = {r2.second, r1.second};
      st.slot[2] = {sp.p_cycle};
      st.notes.push_back("rest: helper pair split, residue strong");
    } else {
      std::vector<Cycle> joint = g.cycles();
      joint.push_back(b2);
      joint.push_back(sp.remainder);
      Permutation w = cycles_perm(n, joint);
      if (w.support_size() + w.nontrivial_cycle_count() <= 2 * p) {
        LetterPool pool(pool_letters);
        TwoCycleResult r = decompose_even(w, p, pool);
        st.slot[0] = {r.first};
        st.slot[1] = {r.second};
        st.slot[2] = {sp.p_cycle};
        st.notes.push_back("rest: absorbed split helper pair");
      } else {
        LetterPool pool(pool_letters);
        TwoCycleResult r1 = decompose_even(w1, p, pool);
        TwoCycleResult r2 = decompose_even(g, p, pool);
        st.slot[0] = {r2.first, r1.first};
        st.slot[1] = {r2.second, r1.second};
        st.slot[2] = {sp.p_cycle};
        st.notes.push_back("rest: helper pair split, shared pool");
      }
    }
    verify_triple(st, want, "rest + short pair helper");
    return st;
  }

  if (n2 > p && n1 <= 2 * p && n2 <= 2 * p) {
    // both-split helper shape: the block pack sits alone in slot 3, so g's
    // pair may borrow from the second block and lead slots 1 and 2.
    SlotTriple ep = even_pair_slots(b1, b2, p);
    LetterPool pool(exclusive_letters(ep, 2));
    TwoCycleResult r = decompose_even(g, p, pool);
    st = std::move(ep);
    st.slot[0].push_back(r.first);
    st.slot[1].push_back(r.second);
    st.notes.push_back("rest: pooled from helper block pack");
    verify_triple(st, want, "rest + split pair helper");
    return st;
  }

  // remaining pair shapes: slot 1 of the pair's triple carries private
  // letters; when too few, cut into the donor reserve and commute the
  // borrowed run through the reserve cycle.
  SlotTriple ep = even_pair_slots(b1, b2, p);
  std::vector<int> free1 = exclusive_letters(ep, 0);
  if (static_cast<int>(free1.size()) >= k) {
    LetterPool pool(free1);
    TwoCycleResult r = decompose_even(g, p, pool);
    st = std::move(ep);
    st.slot[1].push_back(r.first);
    st.slot[2].push_back(r.second);
    st.notes.push_back("rest: pooled from helper slot");
  } else {
    engine_check(ep.donor.has_value(), "rest: no reserve to borrow from");
    const Donor& d = *ep.donor;
    engine_check(static_cast<int>(d.run.size()) >= k, "rest: reserve too short");
    Cycle wrun(d.run.begin(), d.run.begin() + k);
    Cycle pad(wrun.rbegin(), wrun.rend());
    TwoCycleResult r = decompose_even_padded(g, p, pad);
    Cycle reserve = ep.slot[d.slot][d.index];
    CommutedPair cp = commute_through(reserve, r.first, k);
    st = std::move(ep);
    st.slot[0].push_back(cp.a_prime);
    st.slot[d.slot][d.index] = cp.y_prime;
    st.slot[2].push_back(r.second);
    st.notes.push_back("rest: crossed into the donor reserve");
  }
  verify_triple(st, want, "rest + wide pair helper");
  return st;
}

// ---- large leftover ----

struct EvenPeel {
  Cycle a, b;              // strong pair of p-cycles
  std::vector<Cycle> sub;  // the cycles the pair came from
};
struct OddPeel {
  Cycle c;                 // p-cycle (empty for a promoted raw cycle)
  Cycle d;                 // (p-1)-cycle, or the promoted cycle itself
  std::vector<Cycle> sub;
};

// sub * rr = P * w rewritten from scratch: all cycles concatenated into
// one long cycle times a fixing cycle, the long cycle's front p-block
// split off, and the rest a pair borrowing from the block.
SlotTriple fixing_kernel(int n, int p, const std::vector<Cycle>& sub_cycles,
                         const std::vector<Cycle>& rr_cycles) {
  std::vector<Cycle> all = sub_cycles;
  all.insert(all.end(), rr_cycles.begin(), rr_cycles.end());
  LongPlusFixing lf = long_plus_fixing(all);
  SplitOff sp = split_off_p_cycle_front(lf.long_cycle, p, lf.long_cycle[0]);
  Permutation w =
      cycles_perm(n, {sp.remainder}).then(cycles_perm(n, {lf.fixing}));
  engine_check(!w.is_identity(), "fixing kernel: empty residue");
  engine_check(w.support_size() + w.nontrivial_cycle_count() <= 2 * p,
               "fixing kernel: residue out of range");
  std::vector<int> pool_letters;
  for (int x : sp.p_cycle)
    if (!w.moves(x)) pool_letters.push_back(x);
  LetterPool pool(pool_letters);
  TwoCycleResult r = decompose_even(w, p, pool);
  SlotTriple st;
  st.slot[0] = {sp.p_cycle};
  st.slot[1] = {r.first};
  st.slot[2] = {r.second};
  st.notes.push_back("leftover kernel: refolded as long cycle + fixing");
  return st;
}

// kernel joining the first peeled strong pair with the final short rest
SlotTriple pair_kernel(int n, int p, const EvenPeel& ev,
                       const std::vector<Cycle>& rr_cycles) {
  Permutation rr = cycles_perm(n, rr_cycles);
  const int mu = rr.support_size(), cs = rr.nontrivial_cycle_count();
  LetterPool none;
  SlotTriple st;
  std::vector<int> overhang = minus_letters(ev.a, ev.b);
  if (static_cast<int>(overhang.size()) >= p - mu) {
    LetterPool pool(overhang);
    TwoCycleResult r = decompose_even(rr, p, pool);
    st.slot[0] = {ev.a};
    st.slot[1] = {ev.b, r.first};
    st.slot[2] = {r.second};
    st.notes.push_back("leftover kernel: rest borrowed from pair overhang");
  } else if (p + mu + 1 + cs <= 2 * p) {
    std::vector<Cycle> joint = rr_cycles;
    joint.push_back(ev.b);
    TwoCycleResult r = decompose_even(cycles_perm(n, joint), p, none);
    st.slot[0] = {ev.a};
    st.slot[1] = {r.first};
    st.slot[2] = {r.second};
    st.notes.push_back("leftover kernel: rest absorbed into pair half");
  } else {
    st = fixing_kernel(n, p, ev.sub, rr_cycles);
  }
  return st;
}

// kernel joining one peeled p-cycle * (p-1)-cycle with an odd short rest
SlotTriple single_c_kernel(int n, int p, const OddPeel& od,
                           const std::vector<Cycle>& rr_cycles) {
  engine_check(!od.c.empty() && !rr_cycles.empty(), "odd kernel: bad pieces");
  Permutation rr = cycles_perm(n, rr_cycles);
  const int mu = rr.support_size(), cs = rr.nontrivial_cycle_count();
  LetterPool none;
  SlotTriple st;
  std::vector<int> overhang = minus_letters(od.d, od.c);
  if (mu + cs <= p) {
    std::vector<Cycle> joint = rr_cycles;
    joint.push_back(od.d);
    TwoCycleResult r = decompose_even(cycles_perm(n, joint), p, none);
    st.slot[0] = {od.c};
    st.slot[1] = {r.first};
    st.slot[2] = {r.second};
    st.notes.push_back("leftover kernel: rest absorbed next to short cycle");
  } else if (p - mu <= static_cast<int>(overhang.size())) {
    LetterPool pool(overhang);
    TwoCycleResult cd = decompose_odd(rr, p - 1, pool);
    Permutation bridge =
        cycles_perm(n, {cd.second}).then(cycles_perm(n, {od.d}));
    engine_check(bridge.support_size() >= p &&
                     bridge.support_size() + bridge.nontrivial_cycle_count() <=
                         2 * p,
                 "odd kernel: bridge out of range");
    TwoCycleResult r = decompose_even(bridge, p, none);
    st.slot[0] = {od.c, cd.first};
    st.slot[1] = {r.first};
    st.slot[2] = {r.second};
    st.notes.push_back("leftover kernel: rest bridged through short cycles");
  } else {
    st = fixing_kernel(n, p, od.sub, rr_cycles);
  }
  return st;
}

SlotTriple large_rest_slots(const Permutation& g, int p) {
  const int n = g.degree();
  if (!g.is_even())
    throw std::invalid_argument("decompose_large_rest: odd permutation");
  for (const Cycle& c : g.cycles())
    if (static_cast<int>(c.size()) >= p)
      throw std::invalid_argument("decompose_large_rest: cycle of length >= p");
  if (g.support_size() + g.nontrivial_cycle_count() <= 2 * p)
    throw std::invalid_argument("decompose_large_rest: rest not beyond pair bound");

  LetterPool none;
  std::vector<EvenPeel> evens;
  std::vector<OddPeel> odds;
  std::vector<Cycle> rest = g.cycles();
  auto rebuild = [&] { return cycles_perm(n, rest); };
  auto remove_cycles = [&](const std::vector<Cycle>& drop) {
    for (const Cycle& d : drop) {
      auto it = std::find(rest.begin(), rest.end(), d);
      engine_check(it != rest.end(), "peel lost track of a cycle");
      rest.erase(it);
    }
  };
  Permutation r = g;
  auto within_bound = [&](const Permutation& q) {
    return q.support_size() + q.nontrivial_cycle_count() <=
           (q.is_even() ? 2 * p : 2 * p - 1);
  };

  while (!r.is_identity() && !within_bound(r)) {
    Permutation sub = find_reducible_sub(r, p);
    if (sub.is_even()) {
      TwoCycleResult t = decompose_even(sub, p, none);
      evens.push_back({t.first, t.second, sub.cycles()});
    } else {
      TwoCycleResult t = decompose_odd(sub, p - 1, none);
      odds.push_back({t.first, t.second, sub.cycles()});
    }
    remove_cycles(sub.cycles());
    r = rebuild();
  }
  if (!r.is_identity() && r.support_size() >= p) {
    if (r.is_even()) {
      TwoCycleResult t = decompose_even(r, p, none);
      evens.push_back({t.first, t.second, r.cycles()});
    } else {
      TwoCycleResult t = decompose_odd(r, p - 1, none);
      odds.push_back({t.first, t.second, r.cycles()});
    }
    rest.clear();
    r = rebuild();
  }

  SlotTriple st;
  std::size_t ev_from = 0, od_from = 0;
  if (!r.is_identity()) {
    if (!evens.empty()) {
      if (odds.size() % 2 == 1) {
        // promote the longest even-length cycle of the rest to pair with
        // the spare (p-1)-cycle (the rest is odd exactly when the count is)
        const Cycle* best = nullptr;
        for (const Cycle& c : rest)
          if (c.size() % 2 == 0 && (!best || c.size() > best->size()))
            best = &c;
        engine_check(best != nullptr, "leftover: no cycle to promote");
        Cycle prom = *best;
        odds.push_back(OddPeel{{}, prom, {}});
        remove_cycles({prom});
        r = rebuild();
      }
      if (!r.is_identity()) {
        st = pair_kernel(n, p, evens[0], r.cycles());
        ev_from = 1;
      }
    } else {
      engine_check(!odds.empty(), "leftover: nothing peeled");
      if (odds.size() % 2 == 0) {
        engine_check(odds.size() >= 2, "leftover: lone rest");
        std::vector<Cycle> rc = r.cycles();
        const Cycle* beven = nullptr;
        for (const Cycle& c : rc)
          if (c.size() % 2 == 0 && (!beven || c.size() > beven->size()))
            beven = &c;
        if (beven) {
          // the rest is even, so it holds a second even-length cycle: two
          // odd halves feed two single-cycle kernels
          std::vector<Cycle> other;
          for (const Cycle& c : rc)
            if (c != *beven) other.push_back(c);
          engine_check(!other.empty(), "leftover: half split failed");
          SlotTriple k1 = single_c_kernel(n, p, odds[0], {*beven});
          SlotTriple k2 = single_c_kernel(n, p, odds[1], other);
          st = std::move(k1);
          extend_triple(st, std::move(k2));
        } else {
          // all rest cycles odd: bridge the two spare (p-1)-cycles by an
          // explicit pair of p-cycles sharing a successive letter pair
          const Cycle& d1 = odds[0].d;
          const Cycle& d2 = odds[1].d;
          Cycle P = d1;
          P.push_back(d2[0]);
          Cycle Pp{d2[0], d1[0]};
          Pp.insert(Pp.end(), d2.begin() + 1, d2.end());
          engine_check(cycles_perm(n, {P}).then(cycles_perm(n, {Pp})) ==
                           cycles_perm(n, {d1, d2}),
                       "leftover: bridge identity failed");
          const std::vector<int> ab{d1[0], d2[0]};
          const int mu = r.support_size(), cs = r.nontrivial_cycle_count();
          if (mu + cs <= p - 1) {
            std::vector<Cycle> joint = rc;
            joint.push_back(Pp);
            TwoCycleResult t =
                decompose_even_avoid_first(cycles_perm(n, joint), p, none, ab);
            st.slot[0] = {odds[0].c, odds[1].c};
            st.slot[1] = {P, t.first};
            st.slot[2] = {t.second};
          } else {
            // split the rest so each half fits beside one bridge cycle
            const int t = static_cast<int>(rc.size());
            engine_check(t >= 2 && t <= 20, "leftover: rest too fragmented");
            std::vector<Cycle> ha, hb;
            bool found = false;
            for (unsigned mask = 1; mask + 1 < (1u << t) && !found; ++mask) {
              int mua = 0, csa = 0, mub = 0, csb = 0;
              for (int i = 0; i < t; ++i) {
                const int len = static_cast<int>(rc[i].size());
                if (mask & (1u << i)) {
                  mua += len;
                  ++csa;
                } else {
                  mub += len;
                  ++csb;
                }
              }
              if (mua + csa <= p - 1 && mub + csb <= p - 1) {
                ha.clear();
                hb.clear();
                for (int i = 0; i < t; ++i)
                  ((mask & (1u << i)) ? ha : hb).push_back(rc[i]);
                found = true;
              }
            }
            engine_check(found, "leftover: no balanced split of the rest");
            std::vector<Cycle> ja = ha;
            ja.push_back(P);
            std::vector<Cycle> jb = hb;
            jb.push_back(Pp);
            TwoCycleResult ta =
                decompose_even(cycles_perm(n, ja), p, none, ab);
            TwoCycleResult tb =
                decompose_even_avoid_first(cycles_perm(n, jb), p, none, ab);
            st.slot[0] = {odds[0].c, odds[1].c};
            st.slot[1] = {ta.first, tb.first};
            st.slot[2] = {ta.second, tb.second};
          }
          st.notes.push_back("leftover kernel: bridged spare short cycles");
        }
        od_from = 2;
      } else {
        st = single_c_kernel(n, p, odds[0], r.cycles());
        od_from = 1;
      }
    }
  } else {
    engine_check(odds.size() % 2 == 0, "leftover: unpaired peel");
  }

  for (std::size_t i = ev_from; i < evens.size(); ++i) {
    st.slot[0].push_back(evens[i].a);
    st.slot[1].push_back(evens[i].b);
  }
  engine_check((odds.size() - od_from) % 2 == 0, "leftover: unpaired peel");
  for (std::size_t i = od_from; i < odds.size(); i += 2) {
    if (!odds[i].c.empty()) st.slot[0].push_back(odds[i].c);
    if (!odds[i + 1].c.empty()) st.slot[0].push_back(odds[i + 1].c);
    Permutation dd = cycles_perm(n, {odds[i].d, odds[i + 1].d});
    TwoCycleResult t = decompose_even(dd, p, none);
    st.slot[1].push_back(t.first);
    st.slot[2].push_back(t.second);
  }
  st.notes.insert(st.notes.begin(),
                  "leftover: peeled " + std::to_string(evens.size()) + "+" +
                      std::to_string(odds.size()) + " subproducts");
  verify_triple(st, g, "large leftover");
  return st;
}

// ---- assembly ----

Factorization make_result(const Permutation& target, int p, SlotTriple&& st) {
  Factorization f;
  f.target = target;
  f.prime = p;
  f.trace = std::move(st.notes);
  const int n = target.degree();
  for (const auto& s : st.slot) {
    if (s.empty()) continue;
    Permutation fac = cycles_perm(n, s);
    engine_check(!fac.is_identity(), "empty factor");
    engine_check(fac.is_p_element(p), "factor order is not p");
    f.factors.push_back(fac);
  }
  Permutation prod = Permutation::identity(n);
  for (const Permutation& q : f.factors) prod = prod.then(q);
  engine_check(prod == target, "factor product mismatch");
  std::vector<int> sup = target.support();
  f.strong = true;
  for (const Permutation& q : f.factors)
    for (int x : q.support())
      if (!std::binary_search(sup.begin(), sup.end(), x)) f.strong = false;
  f.free_letters = count_free_letters(f.factors);
  return f;
}

}  // namespace

// ---- classification and top level ----

ClassifiedCycles classify(const Permutation& sigma, int p) {
  if (!is_odd_prime(p))
    throw std::invalid_argument("classify: p must be an odd prime");
  ClassifiedCycles out;
  std::vector<Cycle> big;
  for (const Cycle& c : sigma.cycles()) {
    const int len = static_cast<int>(c.size());
    if (len % 2 == 1)
      (len >= p ? out.long_odd : out.short_odd).push_back(c);
    else if (len > p)
      big.push_back(c);
    else
      out.short_even.push_back(c);
  }
  if (big.size() % 2 == 1) {
    // an even permutation has an even number of even-length cycles, so a
    // short one exists; promote the longest (ties: smallest letter)
    std::size_t best = out.short_even.size();
    for (std::size_t i = 0; i < out.short_even.size(); ++i)
      if (best == out.short_even.size() ||
          out.short_even[i].size() > out.short_even[best].size())
        best = i;
    if (best == out.short_even.size())
      throw std::invalid_argument("classify: unpairable even-length cycle");
    big.push_back(out.short_even[best]);
    out.short_even.erase(out.short_even.begin() + best);
  }
  std::sort(big.begin(), big.end(), [](const Cycle& x, const Cycle& y) {
    if (x.size() != y.size()) return x.size() > y.size();
    return x[0] < y[0];
  });
  out.paired_even = std::move(big);
  return out;
}

Factorization decompose_long_odd(const Cycle& a, int p) {
  if (!is_odd_prime(p))
    throw std::invalid_argument("decompose_long_odd: p must be an odd prime");
  if (static_cast<int>(a.size()) < p || a.size() % 2 == 0)
    throw std::invalid_argument("decompose_long_odd: need an odd cycle of length >= p");
  const Permutation target = cycles_perm(max_letter({a}), {a});
  return make_result(target, p, long_odd_slots(a, p, false, {}));
}

Factorization decompose_even_pair(const Cycle& b1, const Cycle& b2, int p) {
  if (!is_odd_prime(p))
    throw std::invalid_argument("decompose_even_pair: p must be an odd prime");
  SlotTriple st = even_pair_slots(b1, b2, p);
  const Permutation target = cycles_perm(max_letter({b1, b2}), {b1, b2});
  return make_result(target, p, std::move(st));
}

Factorization decompose_small_rest(const Permutation& g,
                                   const std::vector<Cycle>& h, int p,
                                   LetterPool& pool) {
  if (!is_odd_prime(p))
    throw std::invalid_argument("decompose_small_rest: p must be an odd prime");
  SlotTriple st = small_rest_slots(g, h, p, pool);
  Permutation target = g.then(cycles_perm(g.degree(), h));
  return make_result(target, p, std::move(st));
}

Permutation find_reducible_sub(const Permutation& g, int p) {
  if (!is_odd_prime(p))
    throw std::invalid_argument("find_reducible_sub: p must be an odd prime");
  const int n = g.degree();
  std::vector<Cycle> cyc = g.cycles();
  for (const Cycle& c : cyc)
    if (static_cast<int>(c.size()) >= p)
      throw std::invalid_argument("find_reducible_sub: cycle of length >= p");
  const int mu = g.support_size(), cs = g.nontrivial_cycle_count();
  if (mu + cs <= (g.is_even() ? 2 * p : 2 * p - 1))
    throw std::invalid_argument("find_reducible_sub: already within the pair bound");
  engine_check(cyc.size() >= 3, "reducible scan: too few cycles");

  std::sort(cyc.begin(), cyc.end(), [](const Cycle& x, const Cycle& y) {
    if (x.size() != y.size()) return x.size() > y.size();
    return x[0] < y[0];
  });
  auto meets = [&](const std::vector<Cycle>& S) {
    int m = 0, evens = 0;
    for (const Cycle& c : S) {
      m += static_cast<int>(c.size());
      if (c.size() % 2 == 0) ++evens;
    }
    const int bound = (evens % 2 == 0) ? 2 * p : 2 * p - 1;
    return m >= p && m + static_cast<int>(S.size()) <= bound;
  };
  std::vector<Cycle> S = cyc;
  while (!meets(S)) {
    if (S.size() > 3) {
      S.pop_back();
      continue;
    }
    engine_check(S.size() == 3, "reducible scan: underflow");
    bool found = false;
    for (int i = 0; i < 3 && !found; ++i)
      for (int j = i + 1; j < 3 && !found; ++j) {
        std::vector<Cycle> cand{S[i], S[j]};
        if (meets(cand)) {
          S = cand;
          found = true;
        }
      }
    engine_check(found, "reducible scan: no subproduct qualifies");
    break;
  }
  return cycles_perm(n, S);
}

Factorization decompose_large_rest(const Permutation& g, int p) {
  if (!is_odd_prime(p))
    throw std::invalid_argument("decompose_large_rest: p must be an odd prime");
  return make_result(g, p, large_rest_slots(g, p));
}

Factorization decompose(const Permutation& sigma, int p) {
  if (!is_odd_prime(p))
    throw std::invalid_argument("decompose: p must be an odd prime");
  if (sigma.degree() < p)
    throw std::invalid_argument("decompose: degree below p");
  if (!sigma.is_even())
    throw std::invalid_argument("decompose: odd permutation");
  const int n = sigma.degree();

  if (sigma.is_identity()) {
    SlotTriple st;
    st.notes.push_back("identity: no factors");
    return make_result(sigma, p, std::move(st));
  }
  if (sigma.is_p_element(p)) {
    Factorization f;
    f.target = sigma;
    f.prime = p;
    f.factors = {sigma};
    f.strong = true;
    f.free_letters = count_free_letters(f.factors);
    f.trace.push_back("already of order p");
    return f;
  }

  ClassifiedCycles cls = classify(sigma, p);
  std::vector<Cycle> rest = cls.short_odd;
  rest.insert(rest.end(), cls.short_even.begin(), cls.short_even.end());

  // choose the leftover route before laying pieces down: it may consume
  // one long odd cycle or one pair as a letter donor
  enum { kNone, kLarge, kStrong, kWeak, kHelper } route = kNone;
  std::vector<Cycle> helper;
  Permutation cd = Permutation::identity(n);
  if (!rest.empty()) {
    cd = cycles_perm(n, rest);
    const int mu = cd.support_size(), cs = cd.nontrivial_cycle_count();
    if (mu + cs > 2 * p)
      route = kLarge;
    else if (mu >= p)
      route = kStrong;
    else if (cls.long_odd.empty() && cls.paired_even.empty())
      route = kWeak;
    else {
      route = kHelper;
      if (!cls.long_odd.empty())
        helper = {cls.long_odd[0]};
      else
        helper = {cls.paired_even[0], cls.paired_even[1]};
    }
  }

  SlotTriple st;
  const std::size_t lo_from = (route == kHelper && helper.size() == 1) ? 1 : 0;
  const std::size_t pr_from = (route == kHelper && helper.size() == 2) ? 2 : 0;
  for (std::size_t i = lo_from; i < cls.long_odd.size(); ++i)
    extend_triple(st, long_odd_slots(cls.long_odd[i], p, false, {}));
  for (std::size_t i = pr_from; i + 1 < cls.paired_even.size(); i += 2)
    extend_triple(st,
                  even_pair_slots(cls.paired_even[i], cls.paired_even[i + 1], p));

  switch (route) {
    case kNone:
      break;
    case kLarge:
      extend_triple(st, large_rest_slots(cd, p));
      break;
    case kStrong: {
      LetterPool none;
      TwoCycleResult r = decompose_even(cd, p, none);
      SlotTriple rt;
      rt.slot[0] = {r.first};
      rt.slot[1] = {r.second};
      rt.notes.push_back("rest: strong pair");
      extend_triple(st, std::move(rt));
      break;
    }
    case kWeak: {
      LetterPool ambient(sigma.fixed_points());
      extend_triple(st, small_rest_slots(cd, {}, p, ambient));
      break;
    }
    case kHelper: {
      LetterPool unused;
      extend_triple(st, small_rest_slots(cd, helper, p, unused));
      break;
    }
  }
  return make_result(sigma, p, std::move(st));
}

// ---- certificates ----

std::vector<int> count_free_letters(const std::vector<Permutation>& factors) {
  std::vector<int> out(factors.size(), 0);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    for (int x : factors[i].support()) {
      bool shared = false;
      for (std::size_t j = 0; j < factors.size() && !shared; ++j)
        shared = j != i && x <= factors[j].degree() && factors[j].moves(x);
      if (!shared) ++out[i];
    }
  }
  return out;
}

bool verify_certificate(const Factorization& f,
                        std::vector<std::string>* reasons) {
  bool ok = true;
  auto fail = [&](const std::string& why) {
    ok = false;
    if (reasons) reasons->push_back(why);
  };
  if (!is_odd_prime(f.prime)) fail("prime field is not an odd prime");
  if (f.factors.size() > 3) fail("more than three factors");
  const int n = f.target.degree();
  for (std::size_t i = 0; i < f.factors.size(); ++i) {
    const Permutation& q = f.factors[i];
    if (q.degree() != n) {
      fail("factor " + std::to_string(i + 1) + " has a different degree");
      continue;
    }
    if (q.is_identity())
      fail("factor " + std::to_string(i + 1) + " is the identity");
    else if (!q.is_p_element(f.prime))
      fail("factor " + std::to_string(i + 1) + " does not have order p");
  }
  Permutation prod = Permutation::identity(n);
  for (const Permutation& q : f.factors)
    if (q.degree() == n) prod = prod.then(q);
  if (!(prod == f.target)) fail("factor product differs from the target");
  bool strong = true;
  std::vector<int> sup = f.target.support();
  for (const Permutation& q : f.factors)
    for (int x : q.support())
      if (!std::binary_search(sup.begin(), sup.end(), x)) strong = false;
  if (strong != f.strong) fail("strong flag does not match the supports");
  if (f.free_letters != count_free_letters(f.factors))
    fail("free letter counts do not match the factors");
  return ok;
}

}  // namespace pwidth
