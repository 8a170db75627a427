#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

namespace kc {

/// Exact rational number backed by GMP.
///
/// Values are always normalized (coprime, positive denominator). Every
/// arithmetic result is checked against a process-wide bit-length cap on
/// numerator and denominator; exceeding it throws RationalOverflow instead of
/// letting intermediate values grow without bound.
class Rational {
 public:
  Rational() = default;
  Rational(long value);  // NOLINT(google-explicit-constructor)
  Rational(int value) : Rational(static_cast<long>(value)) {}  // NOLINT
  Rational(long numerator, long denominator);
  explicit Rational(mpq_class value);

  /// Parses "p/q", an integer, or a finite decimal such as "0.125".
  static Rational parse(std::string_view text);

  [[nodiscard]] const mpq_class& raw() const { return value_; }
  [[nodiscard]] std::string str() const;
  [[nodiscard]] double to_double() const { return value_.get_d(); }
  [[nodiscard]] int sign() const { return sgn(value_); }
  [[nodiscard]] bool is_zero() const { return sign() == 0; }
  [[nodiscard]] bool is_integer() const;
  /// Largest integer not exceeding the value. Throws if it does not fit in int64.
  [[nodiscard]] std::int64_t floor_int() const;
  [[nodiscard]] std::size_t hash() const;
  /// max(bits(numerator), bits(denominator)).
  [[nodiscard]] std::size_t bit_length() const;

  Rational& operator+=(const Rational& other);
  Rational& operator-=(const Rational& other);
  Rational& operator*=(const Rational& other);
  Rational& operator/=(const Rational& other);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a);

  friend bool operator==(const Rational& a, const Rational& b) {
    return cmp(a.value_, b.value_) == 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// Process-wide cap on numerator/denominator bit length (default 4096).
  static void set_bit_cap(std::size_t bits);
  static std::size_t bit_cap();

 private:
  void check() const;
  mpq_class value_;
};

Rational pow(const Rational& base, unsigned exponent);
Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);
Rational abs(const Rational& a);

std::ostream& operator<<(std::ostream& os, const Rational& r);

struct RationalHash {
  std::size_t operator()(const Rational& r) const { return r.hash(); }
};

}  // namespace kc

template <>
struct std::hash<kc::Rational> {
  std::size_t operator()(const kc::Rational& r) const { return r.hash(); }
};
