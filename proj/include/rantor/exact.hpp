#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace rantor {

using BigInt = mpz_class;
using BigRat = mpq_class;

/// Sign of a big integer as -1, 0, +1.
inline int sign_of(const BigInt& z) { return mpz_sgn(z.get_mpz_t()); }
inline int sign_of(const BigRat& r) { return mpq_sgn(r.get_mpq_t()); }

/// Floor of the square root of a nonnegative integer.
BigInt isqrt(const BigInt& n);

bool is_perfect_square(const BigInt& n);

/// Convert to long double keeping the top 64 mantissa bits.
long double to_long_double(const BigInt& z);
long double to_long_double(const BigRat& r);

/// Exact rational power with nonnegative exponent.
BigRat rat_pow(const BigRat& base, unsigned long exp);

/// Enclosure [lo, hi] of sqrt(n) with 2^-bits absolute slack, n >= 0.
struct RatInterval {
    BigRat lo;
    BigRat hi;
};
RatInterval sqrt_bounds(const BigInt& n, unsigned bits);

std::string to_string(const BigInt& z);
std::string to_string(const BigRat& r);

}  // namespace rantor
