#include "pwidth/two_cycles.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

namespace pwidth {

// ---- LetterPool ----

LetterPool::LetterPool(const std::vector<int>& available) : avail_(available) {
  std::sort(avail_.begin(), avail_.end());
  avail_.erase(std::unique(avail_.begin(), avail_.end()), avail_.end());
  if (!avail_.empty() && avail_.front() < 1)
    throw std::invalid_argument("LetterPool: letters must be positive");
}

int LetterPool::take() {
  if (avail_.empty()) throw PoolExhausted("LetterPool: exhausted");
  const int x = avail_.front();
  avail_.erase(avail_.begin());
  consumed_.push_back(x);
  return x;
}

std::vector<int> LetterPool::take(int k) {
  if (k > size()) throw PoolExhausted("LetterPool: exhausted");
  std::vector<int> out;
  out.reserve(k);
  for (int i = 0; i < k; ++i) out.push_back(take());
  return out;
}

void LetterPool::give(int letter) {
  const auto it = std::lower_bound(avail_.begin(), avail_.end(), letter);
  if (it != avail_.end() && *it == letter)
    throw std::invalid_argument("LetterPool: letter already available");
  avail_.insert(it, letter);
}

void LetterPool::give_all(const std::vector<int>& letters) {
  for (int x : letters) give(x);
}

bool LetterPool::contains(int letter) const {
  return std::binary_search(avail_.begin(), avail_.end(), letter);
}

// ---- thresholds ----

int even_pair_threshold(const Permutation& g) {
  if (g.is_identity()) throw std::invalid_argument("even_pair_threshold: identity");
  if (!g.is_even()) throw std::invalid_argument("even_pair_threshold: odd permutation");
  return (g.support_size() + g.nontrivial_cycle_count()) / 2;
}

int odd_pair_threshold(const Permutation& g) {
  if (g.is_even()) throw std::invalid_argument("odd_pair_threshold: even permutation");
  return (g.support_size() + g.nontrivial_cycle_count() - 1) / 2;
}

// ---- small helpers ----

namespace {

Cycle rotate_to_front(const Cycle& c, int pos) {
  Cycle r(c.begin() + pos, c.end());
  r.insert(r.end(), c.begin(), c.begin() + pos);
  return r;
}

int pos_of(const Cycle& c, int x) {
  for (int i = 0; i < static_cast<int>(c.size()); ++i)
    if (c[i] == x) return i;
  return -1;
}

bool in_cycle(const Cycle& c, int x) { return pos_of(c, x) >= 0; }

// Sparse image map over a small letter set; identity off-support.
struct SmallMap {
  std::vector<std::pair<int, int>> img;  // (letter, image)

  int apply(int x) const {
    for (const auto& [a, b] : img)
      if (a == x) return b;
    return x;
  }
  void set(int a, int b) {
    for (auto& [k, v] : img)
      if (k == a) {
        v = b;
        return;
      }
    img.push_back({a, b});
  }
};

SmallMap map_of_cycle(const Cycle& c) {
  SmallMap m;
  if (c.size() >= 2)
    for (int i = 0; i < static_cast<int>(c.size()); ++i)
      m.set(c[i], c[(i + 1) % c.size()]);
  return m;
}

// m followed by the cycle c (left-to-right).
SmallMap compose_with_cycle(const SmallMap& m, const Cycle& c) {
  SmallMap cm = map_of_cycle(c), out;
  for (const auto& [a, b] : m.img) out.set(a, cm.apply(b));
  for (int x : c)
    if (out.apply(x) == x && m.apply(x) == x) out.set(x, cm.apply(x));
  return out;
}

void motor_check(bool ok, const char* msg) {
  if (!ok) throw std::logic_error(std::string("pair motor: ") + msg);
}

// ---- the pair motor ----
//
// Invariants between steps: A and B both contain `anchor` and are stored
// anchor-first; map_of(A) then map_of(B) equals `sofar` (the product of the
// target's cycles absorbed so far); no letter of `avoid` occurs in B.
struct Motor {
  const Permutation& g;
  LetterPool& pool;
  std::vector<int> avoid;  // sorted
  int len_first, len_second;

  Cycle A, B;
  int anchor = 0;
  SmallMap sofar;
  std::vector<int> pad_order;  // when set, pad() uses these letters verbatim

  Motor(const Permutation& g_, int la, int lb, LetterPool& pool_,
        const std::vector<int>& avoid_)
      : g(g_), pool(pool_), avoid(avoid_), len_first(la), len_second(lb) {
    std::sort(avoid.begin(), avoid.end());
  }

  bool avoided(int x) const { return std::binary_search(avoid.begin(), avoid.end(), x); }

  bool pair_valid() const {
    const SmallMap ma = map_of_cycle(A), mb = map_of_cycle(B);
    std::vector<int> uni = A;
    for (int x : B)
      if (!in_cycle(A, x)) uni.push_back(x);
    for (int x : uni)
      if (mb.apply(ma.apply(x)) != sofar.apply(x)) return false;
    // letters moved by sofar but absent from the pair would be a bug
    for (const auto& [a, b] : sofar.img)
      if (a != b && !in_cycle(A, a) && !in_cycle(B, a)) return false;
    return true;
  }

  int diff() const { return static_cast<int>(A.size()) - static_cast<int>(B.size()); }

  // ---- base split ----
  // Odd-length cycle (a1..a_{2k-1}) -> (a1..ak), (a1, a_{k+1}..a_{2k-1});
  // even-length (a1..a_{2k}) -> (a1..a_{k+1}), (a1, a_{k+2}..a_{2k}).
  // The rotation is chosen so no avoided letter lands in the second part.
  void build_base(const Cycle& c) {
    const int m = static_cast<int>(c.size());
    const int a_take = (m + 2) / 2;  // letters going to A (incl. anchor)
    int best = -1;
    for (int s = 0; s < m; ++s) {
      if (avoided(c[s])) continue;
      bool ok = true;
      for (int i = a_take; i < m && ok; ++i) ok = !avoided(c[(s + i) % m]);
      if (ok && (best < 0 || c[s] < c[best])) best = s;
    }
    motor_check(best >= 0, "no feasible base rotation");
    const Cycle rot = rotate_to_front(c, best);
    anchor = rot[0];
    A.assign(rot.begin(), rot.begin() + a_take);
    B.clear();
    B.push_back(anchor);
    B.insert(B.end(), rot.begin() + a_take, rot.end());
    sofar = compose_with_cycle(SmallMap{}, c);
    motor_check(pair_valid(), "base split invalid");
  }

  // ---- absorption ----
  // A' = (anchor, a2..as, c1..cj), B' = (anchor, c_{j+1}..cr, c1, b2..bt);
  // A gains j letters, B gains r - j + 1.
  void apply_absorb(const Cycle& crot, int j) {
    A.insert(A.end(), crot.begin(), crot.begin() + j);
    Cycle nb;
    nb.push_back(B[0]);
    nb.insert(nb.end(), crot.begin() + j, crot.end());
    nb.push_back(crot[0]);
    nb.insert(nb.end(), B.begin() + 1, B.end());
    B = std::move(nb);
  }

  void absorb(const Cycle& c, int diff_target, bool exact) {
    const int r = static_cast<int>(c.size());
    const int d = diff();
    // candidate rotations: ascending start letter; default (no avoid) picks
    // the canonical min-letter rotation with the balance-ideal split point
    std::vector<int> starts(r);
    for (int i = 0; i < r; ++i) starts[i] = i;
    std::sort(starts.begin(), starts.end(), [&](int x, int y) { return c[x] < c[y]; });

    // new diff after taking j letters into A: d + 2j - (r+1); its distance
    // to the target is |2j - ideal2|
    const int ideal2 = diff_target - d + r + 1;
    int best_start = -1, best_j = 0, best_rank = 0, best_dist = 1 << 30;
    for (int rank = 0; rank < r; ++rank) {
      const int s = starts[rank];
      if (avoided(c[s])) continue;
      // avoided letters of c must land in positions 1..j-1 (first-factor
      // zone); position i stays out of B only when j >= i + 1
      int jlo = 1;
      for (int i = 1; i < r; ++i)
        if (avoided(c[(s + i) % r])) jlo = std::max(jlo, i + 1);
      for (int j = jlo; j <= r; ++j) {
        const int dist = std::abs(2 * j - ideal2);
        if (exact && dist != 0) continue;
        if (best_start < 0 || dist < best_dist ||
            (dist == best_dist && (rank < best_rank ||
                                   (rank == best_rank && j < best_j)))) {
          best_start = s;
          best_j = j;
          best_rank = rank;
          best_dist = dist;
        }
      }
    }
    motor_check(best_start >= 0, "no feasible absorption");

    const Cycle crot = rotate_to_front(c, best_start);
    const Cycle savedA = A, savedB = B;
    apply_absorb(crot, best_j);
    sofar = compose_with_cycle(sofar, c);
    if (pair_valid()) return;

    // deterministic bounded fallback: every rotation x split point
    for (int s : starts) {
      if (avoided(c[s])) continue;
      int jlo = 1;
      for (int i = 1; i < r; ++i)
        if (avoided(c[(s + i) % r])) jlo = std::max(jlo, i + 1);
      for (int j = jlo; j <= r; ++j) {
        if (exact && d + 2 * j - (r + 1) != diff_target) continue;
        A = savedA;
        B = savedB;
        apply_absorb(rotate_to_front(c, s), j);
        if (pair_valid()) return;
      }
    }
    motor_check(false, "absorption stuck");
  }

  // ---- inflation ----
  // Grow both cycles by one letter each without touching new letters:
  // pick shared a' whose successor x in A is outside B, and y in B \ A;
  // insert y after a' in A and x after y in B. The mirrored variant works
  // on the reversed pair (swap of borrow direction).
  bool try_inflate(int apos, int y) {
    const int x = A[(apos + 1) % A.size()];
    const Cycle savedA = A, savedB = B;
    A.insert(A.begin() + apos + 1, y);
    B.insert(B.begin() + pos_of(B, y) + 1, x);
    if (pair_valid()) return true;
    A = savedA;
    B = savedB;
    return false;
  }

  bool try_inflate_mirror(int bpos_rev, int y) {
    Cycle ra(A.rbegin(), A.rend()), rb(B.rbegin(), B.rend());
    const int x = rb[(bpos_rev + 1) % rb.size()];
    rb.insert(rb.begin() + bpos_rev + 1, y);
    ra.insert(ra.begin() + pos_of(ra, y) + 1, x);
    const Cycle savedA = A, savedB = B;
    A.assign(ra.rbegin(), ra.rend());
    B.assign(rb.rbegin(), rb.rend());
    A = rotate_to_front(A, pos_of(A, anchor));
    B = rotate_to_front(B, pos_of(B, anchor));
    if (pair_valid()) return true;
    A = savedA;
    B = savedB;
    return false;
  }

  void inflate_once() {
    std::vector<int> b_minus_a, a_minus_b;
    for (int v : B)
      if (!in_cycle(A, v)) b_minus_a.push_back(v);
    for (int v : A)
      if (!in_cycle(B, v)) a_minus_b.push_back(v);
    std::sort(b_minus_a.begin(), b_minus_a.end());
    std::sort(a_minus_b.begin(), a_minus_b.end());
    motor_check(!b_minus_a.empty() && !a_minus_b.empty(), "inflation out of letters");

    // primary: smallest eligible shared letter, smallest y
    std::vector<int> shared_pos;
    for (int i = 0; i < static_cast<int>(A.size()); ++i)
      if (in_cycle(B, A[i])) shared_pos.push_back(i);
    std::sort(shared_pos.begin(), shared_pos.end(),
              [&](int i, int j) { return A[i] < A[j]; });
    for (int i : shared_pos) {
      const int x = A[(i + 1) % A.size()];
      if (in_cycle(B, x) || avoided(x)) continue;  // x joins B
      for (int y : b_minus_a)
        if (try_inflate(i, y)) return;
    }
    // mirrored direction: a letter of A \ B joins B instead
    Cycle rb(B.rbegin(), B.rend());
    std::vector<int> shared_rev;
    for (int i = 0; i < static_cast<int>(rb.size()); ++i)
      if (in_cycle(A, rb[i])) shared_rev.push_back(i);
    std::sort(shared_rev.begin(), shared_rev.end(),
              [&](int i, int j) { return rb[i] < rb[j]; });
    for (int i : shared_rev) {
      const int x = rb[(i + 1) % rb.size()];
      if (in_cycle(A, x)) continue;  // x joins A: no avoid constraint
      for (int y : a_minus_b) {
        if (avoided(y)) continue;  // y joins B
        if (try_inflate_mirror(i, y)) return;
      }
    }
    motor_check(false, "inflation stuck");
  }

  // ---- weak padding ----
  // A' = (o1..oj, a1..as), B' = (b2..bt, a1, oj..o1) with a1 = b1 = anchor.
  // The block identity holds for any ordering of the o's, so a prescribed
  // pad_order is honoured verbatim (the pool still records the letters).
  std::vector<int> pad(int need) {
    std::vector<int> o;
    if (!pad_order.empty()) {
      motor_check(static_cast<int>(pad_order.size()) == need,
                  "pad order size mismatch");
      pool.take(need);
      o = pad_order;
    } else {
      o = pool.take(need);
    }
    for (int x : o) motor_check(!avoided(x), "avoided letter handed out by pool");
    Cycle na(o.begin(), o.end());
    na.insert(na.end(), A.begin(), A.end());
    Cycle nb(B.begin() + 1, B.end());
    nb.push_back(B[0]);
    nb.insert(nb.end(), o.rbegin(), o.rend());
    A = std::move(na);
    B = std::move(nb);
    motor_check(pair_valid(), "padding invalid");
    return o;
  }

  TwoCycleResult run() {
    const int mu = g.support_size();
    const int cs = g.nontrivial_cycle_count();
    const int D = len_first - len_second;

    const int strong_first = std::min(len_first, mu);
    const int need = len_first - strong_first;
    const int strong_second = len_second - need;
    motor_check(strong_first + strong_second >= mu + cs &&
                    (strong_first + strong_second - mu - cs) % 2 == 0,
                "length targets out of range");
    if (need > pool.size()) throw PoolExhausted("decompose: pool too small");

    // Avoided letters moved by g must end up exclusive to the first factor,
    // so the second factor can hold at most mu - |avoid ∩ supp(g)| of the
    // moved letters.  Requests beyond that bound have no solution.
    int avoid_in_mu = 0;
    for (int x : avoid) avoid_in_mu += g.moves(x);
    if (avoid_in_mu > 0 && (need > 0 || len_second > mu - avoid_in_mu))
      throw NoDecomposition(
          "decompose: avoided letters do not fit outside the second factor");

    std::vector<Cycle> cyc = g.cycles();
    std::sort(cyc.begin(), cyc.end(), [](const Cycle& x, const Cycle& y) {
      if (x.size() != y.size()) return x.size() > y.size();
      return x[0] < y[0];
    });

    build_base(cyc[0]);
    for (size_t i = 1; i < cyc.size(); ++i)
      absorb(cyc[i], D, /*exact=*/i + 1 == cyc.size());
    motor_check(static_cast<int>(A.size()) == (mu + cs + D) / 2 && diff() == D,
                "absorption phase missed target");

    const int steps = (strong_first + strong_second - mu - cs) / 2;
    for (int i = 0; i < steps; ++i) inflate_once();

    TwoCycleResult out;
    if (need > 0) out.borrowed = pad(need);
    out.strong = need == 0;

    motor_check(static_cast<int>(A.size()) == len_first &&
                    static_cast<int>(B.size()) == len_second,
                "final lengths wrong");
    for (int x : B) motor_check(!avoided(x), "avoided letter in second factor");
    out.first = canonical_rotation(A);
    out.second = len_second >= 2 ? canonical_rotation(B) : Cycle{};
    return out;
  }
};

Permutation perm_of(int n, const Cycle& c) {
  if (c.size() < 2) return Permutation::identity(n);
  return Permutation::from_cycles(n, {c});
}

void check_result(const Permutation& g, const TwoCycleResult& r) {
  const int n = g.degree();
  motor_check(perm_of(n, r.first).then(perm_of(n, r.second)) == g,
              "result product mismatch");
}

}  // namespace

// ---- public entry points ----

TwoCycleResult decompose_even(const Permutation& g, int l, LetterPool& pool,
                              const std::vector<int>& avoid_in_second) {
  if (g.is_identity()) throw std::invalid_argument("decompose_even: identity");
  if (!g.is_even()) throw std::invalid_argument("decompose_even: odd permutation");
  if (l < even_pair_threshold(g) || l > g.degree())
    throw NoDecomposition("decompose_even: l outside [threshold, n]");
  Motor m(g, l, l, pool, avoid_in_second);
  TwoCycleResult r = m.run();
  check_result(g, r);
  return r;
}

TwoCycleResult decompose_even_avoid_first(const Permutation& g, int l,
                                          LetterPool& pool,
                                          const std::vector<int>& avoid_in_first) {
  // (first * second)^-1 = second^-1 * first^-1: decompose g^-1 keeping the
  // avoided letters out of its second factor, then invert both cycles.
  TwoCycleResult r = decompose_even(g.inverse(), l, pool, avoid_in_first);
  TwoCycleResult out;
  out.first = canonical_rotation(Cycle(r.second.rbegin(), r.second.rend()));
  out.second = canonical_rotation(Cycle(r.first.rbegin(), r.first.rend()));
  out.strong = r.strong;
  out.borrowed = r.borrowed;
  check_result(g, out);
  return out;
}

TwoCycleResult decompose_even_padded(const Permutation& g, int l,
                                     const std::vector<int>& pad_letters,
                                     const std::vector<int>& avoid_in_second) {
  if (g.is_identity())
    throw std::invalid_argument("decompose_even_padded: identity");
  if (!g.is_even())
    throw std::invalid_argument("decompose_even_padded: odd permutation");
  if (l < even_pair_threshold(g) || l > g.degree())
    throw NoDecomposition("decompose_even_padded: l outside [threshold, n]");
  if (static_cast<int>(pad_letters.size()) != l - g.support_size())
    throw std::invalid_argument("decompose_even_padded: wrong pad size");
  std::vector<int> sorted = pad_letters;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("decompose_even_padded: duplicate pad letter");
  for (int x : pad_letters)
    if (g.moves(x))
      throw std::invalid_argument("decompose_even_padded: pad letter moved by target");
  LetterPool pool(sorted);
  Motor m(g, l, l, pool, avoid_in_second);
  m.pad_order = pad_letters;
  TwoCycleResult r = m.run();
  motor_check(r.borrowed == pad_letters, "pad letters unused");
  check_result(g, r);
  return r;
}

TwoCycleResult decompose_odd(const Permutation& g, int l, LetterPool& pool,
                             const std::vector<int>& avoid_in_second) {
  if (g.is_even()) throw std::invalid_argument("decompose_odd: even permutation");
  if (l < odd_pair_threshold(g) || l + 1 > g.degree())
    throw NoDecomposition("decompose_odd: l outside [threshold, n-1]");
  Motor m(g, l + 1, l, pool, avoid_in_second);
  TwoCycleResult r = m.run();
  check_result(g, r);
  return r;
}

// ---- cycle surgery ----

SplitOff split_off_p_cycle(const Cycle& c, int p, int anchor) {
  const int l = static_cast<int>(c.size());
  if (l <= p) throw std::invalid_argument("split_off_p_cycle: cycle too short");
  const int pos = pos_of(c, anchor);
  if (pos < 0) throw std::invalid_argument("split_off_p_cycle: anchor not in cycle");
  const Cycle rot = rotate_to_front(c, pos);
  SplitOff out;
  out.remainder.assign(rot.begin(), rot.begin() + (l - p + 1));
  out.p_cycle.push_back(anchor);
  out.p_cycle.insert(out.p_cycle.end(), rot.begin() + (l - p + 1), rot.end());
  return out;
}

SplitOff split_off_p_cycle_front(const Cycle& c, int p, int anchor) {
  const int l = static_cast<int>(c.size());
  if (l <= p) throw std::invalid_argument("split_off_p_cycle_front: cycle too short");
  const int pos = pos_of(c, anchor);
  if (pos < 0)
    throw std::invalid_argument("split_off_p_cycle_front: anchor not in cycle");
  const Cycle rot = rotate_to_front(c, pos);
  SplitOff out;
  out.p_cycle.assign(rot.begin(), rot.begin() + p);
  out.remainder.push_back(anchor);
  out.remainder.insert(out.remainder.end(), rot.begin() + p, rot.end());
  return out;
}

LongPlusFixing long_plus_fixing(const std::vector<Cycle>& cycles) {
  if (cycles.empty()) throw std::invalid_argument("long_plus_fixing: no cycles");
  LongPlusFixing out;
  for (const Cycle& c : cycles) {
    if (c.size() < 2) throw std::invalid_argument("long_plus_fixing: trivial cycle");
    out.long_cycle.insert(out.long_cycle.end(), c.begin(), c.end());
  }
  if (cycles.size() >= 2)
    for (auto it = cycles.rbegin(); it != cycles.rend(); ++it)
      out.fixing.push_back((*it)[0]);
  return out;
}

LongPlusFixing long_plus_fixing(const Permutation& g) {
  if (g.is_identity()) throw std::invalid_argument("long_plus_fixing: identity");
  return long_plus_fixing(g.cycles());
}

CommutedPair commute_through(const Cycle& y, const Cycle& a, int k) {
  const int p = static_cast<int>(y.size());
  if (static_cast<int>(a.size()) != p)
    throw std::invalid_argument("commute_through: length mismatch");
  if (k < 1 || k > p - 1) throw std::invalid_argument("commute_through: bad k");

  std::vector<int> shared;
  for (int v : y)
    if (in_cycle(a, v)) shared.push_back(v);
  if (static_cast<int>(shared.size()) != k)
    throw std::invalid_argument("commute_through: shared letter count != k");

  // rotate y so the shared run o1..ok is its prefix
  int ystart = -1;
  for (int s = 0; s < p; ++s) {
    bool ok = true;
    for (int i = 0; i < p && ok; ++i) {
      const bool should = i < k;
      ok = in_cycle(a, y[(s + i) % p]) == should;
    }
    if (ok) {
      ystart = s;
      break;
    }
  }
  if (ystart < 0)
    throw std::invalid_argument("commute_through: shared letters not successive in y");
  const Cycle yr = rotate_to_front(y, ystart);

  // a must read ok..o1 then m1..m_{p-k}
  const int apos = pos_of(a, yr[k - 1]);
  Cycle ar = rotate_to_front(a, apos);
  for (int i = 0; i < k; ++i)
    if (ar[i] != yr[k - 1 - i])
      throw std::invalid_argument(
          "commute_through: shared letters not reversed-successive in a");
  const Cycle m(ar.begin() + k, ar.end());
  const Cycle lts(yr.begin() + k, yr.end());
  if (in_cycle(y, m[0]))
    throw std::invalid_argument("commute_through: m1 lies in mu(y)");

  CommutedPair out;
  // A' = (m1..m_{p-k}, ok, o1..o_{k-1}); y' = (m1, o_{k-1}..o1, l1..l_{p-k})
  out.a_prime = m;
  out.a_prime.push_back(yr[k - 1]);
  for (int i = 0; i < k - 1; ++i) out.a_prime.push_back(yr[i]);
  out.y_prime.push_back(m[0]);
  for (int i = k - 2; i >= 0; --i) out.y_prime.push_back(yr[i]);
  out.y_prime.insert(out.y_prime.end(), lts.begin(), lts.end());

  int n = 0;
  for (int v : y) n = std::max(n, v);
  for (int v : a) n = std::max(n, v);
  motor_check(perm_of(n, y).then(perm_of(n, a)) ==
                  perm_of(n, out.a_prime).then(perm_of(n, out.y_prime)),
              "commute_through identity failed");
  out.a_prime = canonical_rotation(out.a_prime);
  out.y_prime = canonical_rotation(out.y_prime);
  return out;
}

bool intersection_bound_holds(const Cycle& a, const Cycle& b) {
  int m = 0, n = 0;
  for (int v : a) n = std::max(n, v);
  for (int v : b) n = std::max(n, v);
  for (int v : a) m += in_cycle(b, v);
  if (m == 0) throw std::invalid_argument("intersection_bound_holds: disjoint cycles");
  const Permutation ab = perm_of(n, a).then(perm_of(n, b));
  return ab.nontrivial_cycle_count() <= m;
}

}  // namespace pwidth
