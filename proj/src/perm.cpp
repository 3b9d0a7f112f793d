#include "pwidth/perm.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <stdexcept>

namespace pwidth {

Permutation::Permutation(int n) {
  if (n < 0) throw std::invalid_argument("Permutation: negative degree");
  img_.resize(n);
  std::iota(img_.begin(), img_.end(), 0);
}

Permutation Permutation::from_images(const std::vector<int>& images_1based) {
  const int n = static_cast<int>(images_1based.size());
  Permutation p(n);
  std::vector<char> seen(n, 0);
  for (int i = 0; i < n; ++i) {
    const int y = images_1based[i];
    if (y < 1 || y > n) throw std::invalid_argument("from_images: image out of range");
    if (seen[y - 1]) throw std::invalid_argument("from_images: not a bijection");
    seen[y - 1] = 1;
    p.img_[i] = y - 1;
  }
  return p;
}

Permutation Permutation::from_cycles(int n, const std::vector<Cycle>& cycles) {
  Permutation p(n);
  std::vector<char> used(n, 0);
  for (const Cycle& c : cycles) {
    if (c.size() < 2) throw std::invalid_argument("from_cycles: cycle of length < 2");
    for (size_t i = 0; i < c.size(); ++i) {
      const int x = c[i];
      if (x < 1 || x > n) throw std::invalid_argument("from_cycles: letter out of range");
      if (used[x - 1]) throw std::invalid_argument("from_cycles: overlapping cycles");
      used[x - 1] = 1;
      p.img_[x - 1] = c[(i + 1) % c.size()] - 1;
    }
  }
  return p;
}

Permutation Permutation::then(const Permutation& q) const {
  if (degree() != q.degree()) throw std::invalid_argument("then: degree mismatch");
  Permutation r;
  r.img_.resize(img_.size());
  for (size_t i = 0; i < img_.size(); ++i) r.img_[i] = q.img_[img_[i]];
  return r;
}

Permutation Permutation::inverse() const {
  Permutation r;
  r.img_.resize(img_.size());
  for (size_t i = 0; i < img_.size(); ++i) r.img_[img_[i]] = static_cast<int>(i);
  return r;
}

Permutation Permutation::power(long long k) const {
  Permutation base = k < 0 ? inverse() : *this;
  if (k < 0) k = -k;
  Permutation acc(degree());
  while (k > 0) {
    if (k & 1) acc = acc.then(base);
    base = base.then(base);
    k >>= 1;
  }
  return acc;
}

Permutation Permutation::embed(int m) const {
  if (m < degree()) throw std::invalid_argument("embed: target degree too small");
  Permutation r(m);
  for (size_t i = 0; i < img_.size(); ++i) r.img_[i] = img_[i];
  return r;
}

bool Permutation::is_identity() const {
  for (size_t i = 0; i < img_.size(); ++i)
    if (img_[i] != static_cast<int>(i)) return false;
  return true;
}

std::vector<Cycle> Permutation::cycles() const {
  std::vector<Cycle> out;
  std::vector<char> seen(img_.size(), 0);
  for (size_t i = 0; i < img_.size(); ++i) {
    if (seen[i] || img_[i] == static_cast<int>(i)) continue;
    Cycle c;
    int x = static_cast<int>(i);
    do {
      seen[x] = 1;
      c.push_back(x + 1);
      x = img_[x];
    } while (x != static_cast<int>(i));
    out.push_back(std::move(c));  // starts at its minimum: scan order
  }
  return out;
}

std::vector<int> Permutation::support() const {
  std::vector<int> s;
  for (size_t i = 0; i < img_.size(); ++i)
    if (img_[i] != static_cast<int>(i)) s.push_back(static_cast<int>(i) + 1);
  return s;
}

int Permutation::support_size() const {
  int k = 0;
  for (size_t i = 0; i < img_.size(); ++i) k += img_[i] != static_cast<int>(i);
  return k;
}

int Permutation::nontrivial_cycle_count() const {
  int k = 0;
  std::vector<char> seen(img_.size(), 0);
  for (size_t i = 0; i < img_.size(); ++i) {
    if (seen[i] || img_[i] == static_cast<int>(i)) continue;
    ++k;
    int x = static_cast<int>(i);
    do {
      seen[x] = 1;
      x = img_[x];
    } while (x != static_cast<int>(i));
  }
  return k;
}

std::vector<int> Permutation::fixed_points() const {
  std::vector<int> s;
  for (size_t i = 0; i < img_.size(); ++i)
    if (img_[i] == static_cast<int>(i)) s.push_back(static_cast<int>(i) + 1);
  return s;
}

bool Permutation::is_even() const {
  // parity = (support size - cycle count) mod 2
  return ((support_size() - nontrivial_cycle_count()) & 1) == 0;
}

static long long lcm_sat(long long a, long long b) {
  const long long g = std::gcd(a, b);
  long long r;
  if (__builtin_mul_overflow(a / g, b, &r)) return LLONG_MAX;
  return r;
}

long long Permutation::order() const {
  long long o = 1;
  for (const Cycle& c : cycles()) o = lcm_sat(o, static_cast<long long>(c.size()));
  return o;
}

bool Permutation::is_p_element(int p) const {
  std::vector<char> seen(img_.size(), 0);
  for (size_t i = 0; i < img_.size(); ++i) {
    if (seen[i] || img_[i] == static_cast<int>(i)) continue;
    int len = 0, x = static_cast<int>(i);
    do {
      seen[x] = 1;
      ++len;
      x = img_[x];
    } while (x != static_cast<int>(i));
    if (len != p) return false;
  }
  return true;
}

std::vector<int> Permutation::cycle_type() const {
  std::vector<int> parts;
  for (const Cycle& c : cycles()) parts.push_back(static_cast<int>(c.size()));
  const int fixed = degree() - cycles_support_size(cycles());
  parts.insert(parts.end(), fixed, 1);
  std::sort(parts.rbegin(), parts.rend());
  return parts;
}

std::string Permutation::str() const { return format_cycles(cycles()); }

Permutation compose(const Permutation& p, const Permutation& q) { return p.then(q); }

// ---- cycle helpers ----

Cycle canonical_rotation(Cycle c) {
  if (c.empty()) return c;
  const auto it = std::min_element(c.begin(), c.end());
  std::rotate(c.begin(), it, c.end());
  return c;
}

std::string format_cycle(const Cycle& c) {
  std::string s = "(";
  for (size_t i = 0; i < c.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(c[i]);
  }
  s += ')';
  return s;
}

std::string format_cycles(const std::vector<Cycle>& cs) {
  std::vector<Cycle> canon;
  canon.reserve(cs.size());
  for (const Cycle& c : cs) canon.push_back(canonical_rotation(c));
  std::sort(canon.begin(), canon.end(),
            [](const Cycle& a, const Cycle& b) { return a[0] < b[0]; });
  if (canon.empty()) return "()";
  std::string s;
  for (const Cycle& c : canon) s += format_cycle(c);
  return s;
}

int cycles_support_size(const std::vector<Cycle>& cs) {
  int k = 0;
  for (const Cycle& c : cs) k += static_cast<int>(c.size());
  return k;
}

// ---- parsing ----

Permutation parse_perm(const std::string& text, int n) {
  std::vector<Cycle> cycles;
  size_t i = 0;
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("parse_perm: " + what + " at position " +
                                std::to_string(i));
  };
  auto skip_ws = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  };
  skip_ws();
  while (i < text.size()) {
    if (text[i] != '(') fail("expected '('");
    ++i;
    Cycle c;
    for (;;) {
      while (i < text.size() && (text[i] == ' ' || text[i] == ',')) ++i;
      if (i < text.size() && text[i] == ')') {
        ++i;
        break;
      }
      if (i >= text.size() || !isdigit(static_cast<unsigned char>(text[i])))
        fail("expected letter or ')'");
      int v = 0;
      while (i < text.size() && isdigit(static_cast<unsigned char>(text[i]))) {
        v = v * 10 + (text[i] - '0');
        if (v > n) fail("letter out of range");
        ++i;
      }
      if (v < 1 || v > n) fail("letter out of range");
      c.push_back(v);
    }
    if (c.size() == 1) fail("singleton cycle");
    if (!c.empty()) cycles.push_back(std::move(c));
    skip_ws();
  }
  try {
    return Permutation::from_cycles(n, cycles);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("parse_perm: ") + e.what());
  }
}

}  // namespace pwidth
