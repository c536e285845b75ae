#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace sfacheck {

using Int = mpz_class;
using Rational = mpq_class;

inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int ceil_div(const Int& a, const Int& b) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

/// Non-negative remainder, `b` != 0.
inline Int euclid_mod(const Int& a, const Int& b) {
  Int r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int floor_of(const Rational& q) {
  return floor_div(q.get_num(), q.get_den());
}

inline Int ceil_of(const Rational& q) {
  return ceil_div(q.get_num(), q.get_den());
}

inline bool is_integral(const Rational& q) { return q.get_den() == 1; }

inline std::string to_string(const Int& v) { return v.get_str(); }

static_assert(sizeof(long) == sizeof(std::int64_t), "LP64 target required");

inline bool fits_int64(const Int& v) { return v.fits_slong_p(); }

inline std::int64_t to_int64(const Int& v) { return v.get_si(); }

inline Int from_int64(std::int64_t v) { return Int(static_cast<long>(v)); }

}  // namespace sfacheck
