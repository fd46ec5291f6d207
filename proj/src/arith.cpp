#include "wind/arith.hpp"

#include <cmath>

namespace wind {

i64 gcd64(i64 a, i64 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) {
    i64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

i64 isqrt64(i64 n) {
  if (n < 0) throw std::domain_error("isqrt64 of negative value");
  if (n == 0) return 0;
  i64 r = i64(std::sqrt(double(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_square(i64 n, i64* root) {
  if (n < 0) return false;
  i64 r = isqrt64(n);
  if (r * r != n) return false;
  if (root) *root = r;
  return true;
}

int kronecker(i64 a, i64 b) {
  if (b == 0) return (a == 1 || a == -1) ? 1 : 0;
  if (a % 2 == 0 && b % 2 == 0) return 0;
  int v = 0;
  while (b % 2 == 0) {
    b /= 2;
    ++v;
  }
  int k = 1;
  if (v % 2 == 1) {
    int am = int(mod_pos(a, 8));
    if (am == 3 || am == 5) k = -1;
  }
  if (b < 0) {
    b = -b;
    if (a < 0) k = -k;
  }
  a = mod_pos(a, b);
  while (a != 0) {
    v = 0;
    while (a % 2 == 0) {
      a /= 2;
      ++v;
    }
    if (v % 2 == 1) {
      int bm = int(b % 8);
      if (bm == 3 || bm == 5) k = -k;
    }
    if (a % 4 == 3 && b % 4 == 3) k = -k;
    i64 t = b % a;
    b = a;
    a = t;
  }
  return b == 1 ? k : 0;
}

bool is_squarefree(i64 n) {
  if (n == 0) return false;
  if (n < 0) n = -n;
  for (i64 p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return false;
    }
  }
  return true;
}

bool is_fundamental_discriminant(i64 d) {
  if (d == 1) return true;
  i64 m = mod_pos(d, 4);
  if (m == 1) return is_squarefree(d);
  if (m == 0) {
    i64 q = d / 4;
    i64 qm = mod_pos(q, 4);
    return (qm == 2 || qm == 3) && is_squarefree(q);
  }
  return false;
}

std::string to_string_i128(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  std::string s;
  i128 u = abs128(v);
  while (u > 0) {
    s.push_back(char('0' + int(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  return std::string(s.rbegin(), s.rend());
}

Rational Rational::make(i128 n, i128 d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  i128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  Rational r;
  r.num = checked_i64(n, "rational numerator exceeds int64");
  r.den = checked_i64(d, "rational denominator exceeds int64");
  return r;
}

Rational Rational::frac() const {
  Rational r;
  r.num = mod_pos(num, den);
  r.den = den;
  i64 g = gcd64(r.num, r.den);
  if (g > 1) {
    r.num /= g;
    r.den /= g;
  }
  return r;
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

Rational sawtooth_b1(const Rational& x) {
  if (x.is_integer()) return Rational(0);
  return x.frac() - Rational(1, 2);
}

Real sawtooth_b1(Real x) {
  Real f = x - std::floor(x);
  if (f == Real(0)) return Real(0);
  return f - Real(0.5L);
}

Cplx e_of(Real x) {
  Real t = 2 * PI * (x - std::floor(x));
  return Cplx(std::cos(t), std::sin(t));
}

}  // namespace wind
