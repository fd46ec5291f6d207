#pragma once
// Exact integer / rational arithmetic helpers used throughout the library.
// Rationals are int64-backed with __int128 intermediates; anything that would
// leave the representable range throws std::overflow_error rather than wrap.

#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace wind {

using i64 = std::int64_t;
using i128 = __int128;

#ifdef WIND_HIGH_PRECISION
using Real = long double;
#else
using Real = double;
#endif
using Cplx = std::complex<Real>;

inline constexpr Real PI = Real(3.14159265358979323846264338327950288L);

// numerical accuracy cannot be guaranteed (distinct from domain misuse)
struct precision_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] inline void overflow_fail(const char* what) {
  throw std::overflow_error(what);
}

inline i64 checked_i64(i128 v, const char* what = "value exceeds int64") {
  if (v > i128(std::numeric_limits<i64>::max()) ||
      v < i128(std::numeric_limits<i64>::min()))
    overflow_fail(what);
  return static_cast<i64>(v);
}

inline i128 abs128(i128 v) { return v < 0 ? -v : v; }

inline i128 add_i128(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) overflow_fail("int128 addition overflow");
  return r;
}
inline i128 mul_i128(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) overflow_fail("int128 multiplication overflow");
  return r;
}

i64 gcd64(i64 a, i64 b);          // >= 0
i128 gcd128(i128 a, i128 b);      // >= 0
i64 isqrt64(i64 n);               // floor(sqrt(n)), n >= 0
bool is_square(i64 n, i64* root = nullptr);
int kronecker(i64 a, i64 n);
bool is_squarefree(i64 n);        // |n| squarefree, n != 0
bool is_fundamental_discriminant(i64 d);  // includes d == 1
std::string to_string_i128(i128 v);

// floor division / non-negative remainder for possibly negative operands
inline i64 floor_div(i64 a, i64 b) {
  i64 q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}
inline i64 mod_pos(i64 a, i64 b) {
  i64 r = a % b;
  if (r < 0) r += (b < 0 ? -b : b);
  return r;
}

struct Rational {
  i64 num = 0;
  i64 den = 1;  // always > 0, gcd(num, den) == 1

  Rational() = default;
  Rational(i64 n) : num(n), den(1) {}
  Rational(i64 n, i64 d) { *this = make(n, d); }

  static Rational make(i128 n, i128 d);

  bool is_integer() const { return den == 1; }
  bool is_zero() const { return num == 0; }
  i64 floor() const { return floor_div(num, den); }
  i64 ceil() const { return -floor_div(-num, den); }
  Rational frac() const;  // in [0,1)
  Real to_real() const { return Real(num) / Real(den); }
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b) {
    return make(i128(a.num) * b.den + i128(b.num) * a.den, i128(a.den) * b.den);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return make(i128(a.num) * b.den - i128(b.num) * a.den, i128(a.den) * b.den);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make(i128(a.num) * b.num, i128(a.den) * b.den);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num == 0) throw std::domain_error("rational division by zero");
    return make(i128(a.num) * b.den, i128(a.den) * b.num);
  }
  Rational operator-() const {
    Rational r;
    r.num = -num;
    r.den = den;
    return r;
  }
  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return i128(a.num) * b.den < i128(b.num) * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }
};

// sawtooth: x - (ceil(x) + floor(x))/2; vanishes at integers, else frac(x) - 1/2
Rational sawtooth_b1(const Rational& x);
Real sawtooth_b1(Real x);

// e(x) = exp(2*pi*i*x)
Cplx e_of(Real x);
inline Cplx e_of(const Rational& x) { return e_of(x.frac().to_real()); }

}  // namespace wind
