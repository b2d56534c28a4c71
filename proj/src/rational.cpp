#include "ncp/rational.hpp"

#include <limits>
#include <stdexcept>

namespace ncp {

namespace {

constexpr int64_t kMax = std::numeric_limits<int64_t>::max();

unsigned __int128 gcd128(unsigned __int128 a, unsigned __int128 b) {
  while (b != 0) {
    unsigned __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

mpz_class mpz_from128(__int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  mpz_class hi(static_cast<unsigned long>(static_cast<uint64_t>(u >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<uint64_t>(u)));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

}  // namespace

Rational::Rational(long long n, long long d) {
  if (d == 0) throw std::domain_error("Rational: zero denominator");
  assign128(n, d);
}

Rational::Rational(const mpq_class& q) { assign_big(q); }

Rational::Rational(const Rational& o) : n_(o.n_), d_(o.d_) {
  if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
}

Rational& Rational::operator=(const Rational& o) {
  if (this == &o) return *this;
  n_ = o.n_;
  d_ = o.d_;
  if (o.big_)
    big_ = std::make_unique<mpq_class>(*o.big_);
  else
    big_.reset();
  return *this;
}

Rational Rational::parse(const std::string& text) {
  std::string t;
  for (char c : text)
    if (c != ' ' && c != '\t') t.push_back(c);
  if (t.empty()) throw std::invalid_argument("empty rational");
  auto check_int = [](const std::string& s) {
    size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  auto slash = t.find('/');
  std::string num = t.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : t.substr(slash + 1);
  if (!check_int(num) || !check_int(den) || den[0] == '-' || den[0] == '+')
    throw std::invalid_argument("malformed rational '" + text + "'");
  if (num[0] == '+') num = num.substr(1);
  mpz_class zn(num, 10), zd(den, 10);
  if (zd == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  mpq_class q(zn, zd);
  q.canonicalize();
  return Rational(q);
}

void Rational::assign_big(const mpq_class& q) {
  mpq_class c(q);
  c.canonicalize();
  const mpz_class& num = c.get_num();
  const mpz_class& den = c.get_den();
  if (num.fits_slong_p() && den.fits_slong_p() && num.get_si() != std::numeric_limits<long>::min()) {
    n_ = num.get_si();
    d_ = den.get_si();
    big_.reset();
  } else {
    n_ = 0;
    d_ = 1;
    big_ = std::make_unique<mpq_class>(c);
  }
}

void Rational::assign128(__int128 num, __int128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num == 0) {
    n_ = 0;
    d_ = 1;
    big_.reset();
    return;
  }
  unsigned __int128 un = num < 0 ? static_cast<unsigned __int128>(-num) : static_cast<unsigned __int128>(num);
  unsigned __int128 g = gcd128(un, static_cast<unsigned __int128>(den));
  if (g > 1) {
    num /= static_cast<__int128>(g);
    den /= static_cast<__int128>(g);
  }
  if (num <= kMax && num >= -kMax && den <= kMax) {
    n_ = static_cast<int64_t>(num);
    d_ = static_cast<int64_t>(den);
    big_.reset();
  } else {
    mpq_class q(mpz_from128(num), mpz_from128(den));
    n_ = 0;
    d_ = 1;
    big_ = std::make_unique<mpq_class>(q);
  }
}

int Rational::sign() const {
  if (big_) return sgn(*big_);
  return n_ > 0 ? 1 : (n_ < 0 ? -1 : 0);
}

bool Rational::is_integer() const { return big_ ? big_->get_den() == 1 : d_ == 1; }

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  mpq_class q(mpz_class(static_cast<long>(n_)), mpz_class(static_cast<long>(d_)));
  return q;
}

std::string Rational::str() const {
  if (big_) return big_->get_str();
  if (d_ == 1) return std::to_string(n_);
  return std::to_string(n_) + "/" + std::to_string(d_);
}

Rational Rational::operator-() const {
  Rational r(*this);
  if (r.big_)
    *r.big_ = -*r.big_;
  else
    r.n_ = -r.n_;
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  if (!big_ && !o.big_) {
    if (d_ == 1 && o.d_ == 1) {
      long long r;
      if (!__builtin_add_overflow(n_, o.n_, &r) && r != std::numeric_limits<long long>::min()) {
        n_ = r;
        return *this;
      }
    }
    assign128(static_cast<__int128>(n_) * o.d_ + static_cast<__int128>(o.n_) * d_,
              static_cast<__int128>(d_) * o.d_);
    return *this;
  }
  assign_big(to_mpq() + o.to_mpq());
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  if (!big_ && !o.big_) {
    if (d_ == 1 && o.d_ == 1) {
      long long r;
      if (!__builtin_sub_overflow(n_, o.n_, &r) && r != std::numeric_limits<long long>::min()) {
        n_ = r;
        return *this;
      }
    }
    assign128(static_cast<__int128>(n_) * o.d_ - static_cast<__int128>(o.n_) * d_,
              static_cast<__int128>(d_) * o.d_);
    return *this;
  }
  assign_big(to_mpq() - o.to_mpq());
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  if (!big_ && !o.big_) {
    if (d_ == 1 && o.d_ == 1) {
      long long r;
      if (!__builtin_mul_overflow(n_, o.n_, &r) && r != std::numeric_limits<long long>::min()) {
        n_ = r;
        return *this;
      }
    }
    assign128(static_cast<__int128>(n_) * o.n_, static_cast<__int128>(d_) * o.d_);
    return *this;
  }
  assign_big(to_mpq() * o.to_mpq());
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("Rational: division by zero");
  if (!big_ && !o.big_) {
    assign128(static_cast<__int128>(n_) * o.d_, static_cast<__int128>(d_) * o.n_);
    return *this;
  }
  assign_big(to_mpq() / o.to_mpq());
  return *this;
}

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.n_ == b.n_ && a.d_ == b.d_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // canonical forms differ in representation only when values differ
}

bool operator<(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_)
    return static_cast<__int128>(a.n_) * b.d_ < static_cast<__int128>(b.n_) * a.d_;
  return a.to_mpq() < b.to_mpq();
}

}  // namespace ncp
