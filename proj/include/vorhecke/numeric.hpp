#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vh {

using Int = mpz_class;
using Rat = mpq_class;

using IVec = std::vector<Int>;
using QVec = std::vector<Rat>;

// Structured error with a stable machine-readable code (used by the CLI to
// emit error JSON).
struct Error : std::runtime_error {
  std::string code;
  Error(std::string c, const std::string& msg)
      : std::runtime_error(c + ": " + msg), code(std::move(c)) {}
};

#define VH_CHECK(cond, code, msg)      \
  do {                                 \
    if (!(cond)) throw vh::Error(code, msg); \
  } while (0)

// mpq_class(num, den) does not canonicalize; always construct through this.
inline Rat make_rat(const Int& num, const Int& den) {
  VH_CHECK(den != 0, "ZeroDenominator", "rational with zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline Rat rat_of(const Int& n) { return Rat(n); }

// ---- vector helpers ------------------------------------------------------

inline QVec to_qvec(const IVec& v) {
  QVec out(v.size());
  for (size_t i = 0; i < v.size(); i++) out[i] = Rat(v[i]);
  return out;
}

inline bool is_zero(const QVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

inline bool is_zero(const IVec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

inline QVec add(const QVec& a, const QVec& b) {
  QVec out(a.size());
  for (size_t i = 0; i < a.size(); i++) out[i] = a[i] + b[i];
  return out;
}

inline QVec sub(const QVec& a, const QVec& b) {
  QVec out(a.size());
  for (size_t i = 0; i < a.size(); i++) out[i] = a[i] - b[i];
  return out;
}

inline QVec scale(const Rat& c, const QVec& a) {
  QVec out(a.size());
  for (size_t i = 0; i < a.size(); i++) out[i] = c * a[i];
  return out;
}

inline Rat dot(const QVec& a, const QVec& b) {
  Rat s = 0;
  for (size_t i = 0; i < a.size(); i++) s += a[i] * b[i];
  return s;
}

inline Int dot(const IVec& a, const IVec& b) {
  Int s = 0;
  for (size_t i = 0; i < a.size(); i++) s += a[i] * b[i];
  return s;
}

inline Int content(const IVec& v) {
  Int g = 0;
  for (const auto& x : v) g = gcd(g, x);
  return g;
}

// Primitive integer vector on the ray through v (direction preserved).
inline IVec primitive(const QVec& v) {
  VH_CHECK(!is_zero(v), "ZeroVector", "primitive() of zero vector");
  Int l = 1;
  for (const auto& x : v) l = lcm(l, x.get_den());
  IVec w(v.size());
  for (size_t i = 0; i < v.size(); i++) {
    Rat t = v[i] * Rat(l);
    w[i] = t.get_num();
  }
  Int g = content(w);
  for (auto& x : w) x /= g;
  return w;
}

inline IVec primitive(const IVec& v) {
  VH_CHECK(!is_zero(v), "ZeroVector", "primitive() of zero vector");
  Int g = content(v);
  IVec w(v.size());
  for (size_t i = 0; i < v.size(); i++) w[i] = v[i] / g;
  return w;
}

// Sign normalization used for cusp vectors: first nonzero entry positive
// (identifies v and -v).
inline IVec sign_normalize(IVec v) {
  for (const auto& x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : v) y = -y;
    break;
  }
  return v;
}

inline int lex_cmp(const IVec& a, const IVec& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = 0; i < a.size(); i++) {
    int c = cmp(a[i], b[i]);
    if (c != 0) return c;
  }
  return 0;
}

inline int lex_cmp(const QVec& a, const QVec& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = 0; i < a.size(); i++) {
    int c = cmp(a[i], b[i]);
    if (c != 0) return c;
  }
  return 0;
}

// The fixed total order on points and rays used for tuple normalization,
// canonical representatives and cusp-selection tie breaks.
struct LexLess {
  bool operator()(const IVec& a, const IVec& b) const { return lex_cmp(a, b) < 0; }
  bool operator()(const QVec& a, const QVec& b) const { return lex_cmp(a, b) < 0; }
};

inline std::string to_string(const IVec& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); i++) {
    if (i) s += ",";
    s += v[i].get_str();
  }
  return s;
}

inline std::string to_string(const QVec& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); i++) {
    if (i) s += ",";
    s += v[i].get_str();
  }
  return s;
}

// Deterministic RNG for property suites (seed-stable across platforms,
// unlike std::uniform_int_distribution).
struct SplitMix64 {
  uint64_t state;
  explicit SplitMix64(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // uniform in [lo, hi] inclusive
  int64_t range(int64_t lo, int64_t hi) {
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    uint64_t lim = UINT64_MAX - UINT64_MAX % span;
    uint64_t x;
    do {
      x = next();
    } while (x >= lim);
    return lo + static_cast<int64_t>(x % span);
  }
};

}  // namespace vh
