#include "kc/rational.hpp"

#include <atomic>
#include <cctype>
#include <limits>
#include <ostream>

#include "kc/errors.hpp"

namespace kc {
namespace {

std::atomic<std::size_t> g_bit_cap{4096};

bool is_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (std::isdigit(static_cast<unsigned char>(c)) == 0) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  std::string_view digits = s;
  bool negative = false;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
    negative = digits.front() == '-';
    digits.remove_prefix(1);
  }
  if (!is_digits(digits)) {
    throw ParseError("not a rational number: \"" + std::string(whole) + "\"");
  }
  mpz_class z(std::string(digits), 10);
  return negative ? mpz_class(-z) : z;
}

std::size_t hash_mpz(mpz_srcptr z) {
  std::size_t h = static_cast<std::size_t>(mpz_sgn(z)) * 0x9e3779b97f4a7c15ULL;
  const std::size_t n = mpz_size(z);
  for (std::size_t i = 0; i < n; ++i) {
    const auto limb = static_cast<std::size_t>(mpz_getlimbn(z, static_cast<mp_size_t>(i)));
    h ^= limb + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace

Rational::Rational(long value) : value_(value) {}

Rational::Rational(long numerator, long denominator) {
  if (denominator == 0) throw Error("rational with zero denominator");
  value_ = mpq_class(numerator, denominator);
  value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) {
  value_.canonicalize();
  check();
}

Rational Rational::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw ParseError("empty rational literal");

  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(s.substr(0, slash), text);
    mpz_class den = parse_integer(s.substr(slash + 1), text);
    if (den == 0) throw ParseError("zero denominator in \"" + std::string(text) + "\"");
    return Rational(mpq_class(num, den));
  }
  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    bool negative = false;
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
      negative = int_part.front() == '-';
      int_part.remove_prefix(1);
    }
    if ((!int_part.empty() && !is_digits(int_part)) || (!frac_part.empty() && !is_digits(frac_part)) ||
        (int_part.empty() && frac_part.empty())) {
      throw ParseError("not a rational number: \"" + std::string(text) + "\"");
    }
    mpz_class whole = int_part.empty() ? mpz_class(0) : mpz_class(std::string(int_part), 10);
    mpz_class frac = frac_part.empty() ? mpz_class(0) : mpz_class(std::string(frac_part), 10);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac_part.size());
    mpq_class q(whole * scale + frac, scale);
    if (negative) q = -q;
    return Rational(q);
  }
  return Rational(mpq_class(parse_integer(s, text)));
}

std::string Rational::str() const {
  if (value_.get_den() == 1) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

bool Rational::is_integer() const { return value_.get_den() == 1; }

std::int64_t Rational::floor_int() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  if (!q.fits_slong_p()) throw RationalOverflow("floor does not fit in 64 bits");
  return q.get_si();
}

std::size_t Rational::hash() const {
  const std::size_t a = hash_mpz(value_.get_num_mpz_t());
  const std::size_t b = hash_mpz(value_.get_den_mpz_t());
  return a ^ (b * 0xff51afd7ed558ccdULL + (a << 7));
}

std::size_t Rational::bit_length() const {
  const std::size_t a = mpz_sizeinbase(value_.get_num_mpz_t(), 2);
  const std::size_t b = mpz_sizeinbase(value_.get_den_mpz_t(), 2);
  return a > b ? a : b;
}

void Rational::check() const {
  const std::size_t cap = g_bit_cap.load(std::memory_order_relaxed);
  if (bit_length() > cap) {
    throw RationalOverflow("rational exceeds " + std::to_string(cap) + "-bit cap");
  }
}

Rational& Rational::operator+=(const Rational& other) {
  value_ += other.value_;
  check();
  return *this;
}

Rational& Rational::operator-=(const Rational& other) {
  value_ -= other.value_;
  check();
  return *this;
}

Rational& Rational::operator*=(const Rational& other) {
  value_ *= other.value_;
  check();
  return *this;
}

Rational& Rational::operator/=(const Rational& other) {
  if (other.is_zero()) throw Error("division by zero");
  value_ /= other.value_;
  check();
  return *this;
}

Rational operator-(const Rational& a) {
  Rational r = a;
  r.value_ = -r.value_;
  return r;
}

void Rational::set_bit_cap(std::size_t bits) { g_bit_cap.store(bits, std::memory_order_relaxed); }
std::size_t Rational::bit_cap() { return g_bit_cap.load(std::memory_order_relaxed); }

Rational pow(const Rational& base, unsigned exponent) {
  Rational result(1);
  Rational b = base;
  while (exponent > 0) {
    if ((exponent & 1U) != 0U) result *= b;
    exponent >>= 1U;
    if (exponent > 0) b *= b;
  }
  return result;
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }
Rational abs(const Rational& a) { return a.sign() < 0 ? -a : a; }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace kc
