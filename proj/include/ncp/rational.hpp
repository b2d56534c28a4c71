#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>

namespace ncp {

// Exact rational number. Values whose numerator and denominator fit in
// 64 bits are stored inline; larger values spill into a GMP rational.
// Invariant: gcd(|num|, den) = 1 and den > 0 in both representations.
class Rational {
 public:
  Rational() = default;
  Rational(long long n) : n_(n), d_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(int n) : n_(n), d_(1) {}        // NOLINT(google-explicit-constructor)
  Rational(long long n, long long d);
  explicit Rational(const mpq_class& q);

  Rational(const Rational& o);
  Rational(Rational&& o) noexcept = default;
  Rational& operator=(const Rational& o);
  Rational& operator=(Rational&& o) noexcept = default;
  ~Rational() = default;

  // Accepts "p", "-p", "p/q" with arbitrary-length integers.
  static Rational parse(const std::string& text);

  bool is_zero() const { return !big_ && n_ == 0; }
  bool is_one() const { return !big_ && n_ == 1 && d_ == 1; }
  int sign() const;
  bool is_integer() const;

  mpq_class to_mpq() const;
  std::string str() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b);
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b);

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  void assign_big(const mpq_class& q);
  void assign128(__int128 num, __int128 den);

  int64_t n_ = 0;
  int64_t d_ = 1;
  std::unique_ptr<mpq_class> big_;
};

}  // namespace ncp
