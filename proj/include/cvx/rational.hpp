#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cvx {

// Exact rational arithmetic on top of GMP. Every value is kept canonical
// (lowest terms, positive denominator), so equality and ordering are exact
// cross-multiplication comparisons with no rounding anywhere.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(int n) : v_(n) {}
  Rational(long n) : v_(n) {}
  Rational(long long n) : v_(static_cast<long>(n)) {}

  Rational(long num, long den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }

  Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }

  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  // Accepts "p", "p/q" and plain decimals like "-3.25" (d digits after the
  // point become an exact denominator 10^d).
  static Rational parse(std::string_view text);

  const mpz_class& num() const { return v_.get_num(); }
  const mpz_class& den() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }

  bool is_integer() const { return v_.get_den() == 1; }

  bool fits_int64() const {
    return is_integer() && v_.get_num().fits_slong_p();
  }

  std::int64_t as_int64() const {
    if (!fits_int64()) throw std::domain_error("Rational: not a small integer");
    return v_.get_num().get_si();
  }

  int sign() const { return sgn(v_); }

  std::string to_string() const {
    if (is_integer()) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  double to_double() const { return v_.get_d(); }

  Rational operator-() const { return Rational(mpq_class(-v_), already_canonical{}); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.sign() == 0) throw std::domain_error("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

 private:
  struct already_canonical {};
  Rational(mpq_class q, already_canonical) : v_(std::move(q)) {}

  mpq_class v_;
};

inline mpz_class floor_mpz(const Rational& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.num().get_mpz_t(), r.den().get_mpz_t());
  return q;
}

inline mpz_class ceil_mpz(const Rational& r) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), r.num().get_mpz_t(), r.den().get_mpz_t());
  return q;
}

inline long to_long_checked(const mpz_class& z, const char* what) {
  if (!z.fits_slong_p()) throw std::domain_error(std::string(what) + ": out of range");
  return z.get_si();
}

inline long floor_to_long(const Rational& r) { return to_long_checked(floor_mpz(r), "floor"); }
inline long ceil_to_long(const Rational& r) { return to_long_checked(ceil_mpz(r), "ceil"); }

// round-to-nearest with halves going up: floor(r + 1/2)
inline long round_half_up_to_long(const Rational& r) {
  return floor_to_long(r + Rational(1, 2));
}

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

namespace detail {
// true iff 2^t >= p/q  (p, q > 0)
inline bool pow2_geq(long t, const mpz_class& p, const mpz_class& q) {
  mpz_class lhs;
  if (t >= 0) {
    mpz_mul_2exp(lhs.get_mpz_t(), q.get_mpz_t(), static_cast<mp_bitcnt_t>(t));
    return lhs >= p;
  }
  mpz_mul_2exp(lhs.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(-t));
  return q >= lhs;
}
}  // namespace detail

// smallest integer t with 2^t >= x, computed exactly (t may be negative)
inline long ceil_log2(const Rational& x) {
  if (x.sign() <= 0) throw std::domain_error("ceil_log2: nonpositive argument");
  const mpz_class& p = x.num();
  const mpz_class& q = x.den();
  long t = static_cast<long>(mpz_sizeinbase(p.get_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 2)) - 1;
  while (!detail::pow2_geq(t, p, q)) ++t;
  while (detail::pow2_geq(t - 1, p, q)) --t;
  return t;
}

// smallest integer m with m >= c*log2(x), i.e. 2^m >= x^c; exact, no floats
inline long ceil_mul_log2(unsigned long c, const Rational& x) {
  if (x.sign() <= 0) throw std::domain_error("ceil_mul_log2: nonpositive argument");
  mpz_class pn, pd;
  mpz_pow_ui(pn.get_mpz_t(), x.num().get_mpz_t(), c);
  mpz_pow_ui(pd.get_mpz_t(), x.den().get_mpz_t(), c);
  return ceil_log2(Rational(pn, pd));
}

inline Rational pow2(long t) {
  mpz_class one = 1, shifted;
  mpz_mul_2exp(shifted.get_mpz_t(), one.get_mpz_t(), static_cast<mp_bitcnt_t>(t >= 0 ? t : -t));
  return t >= 0 ? Rational(shifted, mpz_class(1)) : Rational(mpz_class(1), shifted);
}

inline Rational Rational::parse(std::string_view text) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("Rational::parse: empty input");

  std::string s(text);
  try {
    if (auto slash = s.find('/'); slash != std::string::npos) {
      std::string ns = s.substr(0, slash), ds = s.substr(slash + 1);
      if (!ns.empty() && ns.front() == '+') ns.erase(0, 1);
      if (!ds.empty() && ds.front() == '+') ds.erase(0, 1);
      if (ns.empty() || ds.empty()) throw std::invalid_argument("bad fraction");
      mpz_class num(ns), den(ds);
      if (den == 0) throw std::domain_error("Rational::parse: zero denominator");
      return Rational(num, den);
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
      bool neg = false;
      std::string body = s;
      if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        neg = body.front() == '-';
        body.erase(0, 1);
        dot = body.find('.');
      }
      std::string ip = body.substr(0, dot), fp = body.substr(dot + 1);
      if (ip.empty() && fp.empty()) throw std::invalid_argument("bad decimal");
      for (char c : ip + fp)
        if (c < '0' || c > '9') throw std::invalid_argument("bad decimal digit");
      mpz_class scale;
      mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
      mpz_class num = (ip.empty() ? mpz_class(0) : mpz_class(ip)) * scale +
                      (fp.empty() ? mpz_class(0) : mpz_class(fp));
      if (neg) num = -num;
      return Rational(num, scale);
    }
    std::string ns = s;
    if (!ns.empty() && ns.front() == '+') ns.erase(0, 1);
    return Rational(mpz_class(ns), mpz_class(1));
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("Rational::parse: cannot parse '" + s + "'");
  }
}

}  // namespace cvx
