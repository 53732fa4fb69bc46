#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace chunkwise {

using int128 = __int128;
using uint128 = unsigned __int128;

inline constexpr std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) {
  return a == 0 ? 0 : (a - 1) / b + 1;
}

inline constexpr std::uint64_t ceil_div_u128(uint128 a, uint128 b) {
  uint128 q = a == 0 ? 0 : (a - 1) / b + 1;
  if (q > uint128(UINT64_MAX)) throw std::overflow_error("ceil_div_u128: quotient exceeds 64 bits");
  return static_cast<std::uint64_t>(q);
}

/// Exact signed rational on 64-bit numerator/denominator, always stored
/// reduced with a positive denominator. Intermediates use 128-bit integers;
/// a result that does not fit back into 64 bits throws std::overflow_error.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT: implicit by design
  Rational(std::int64_t num, std::int64_t den) { *this = make(num, den); }

  /// Exact parse of "3", "-2.25", "1/3". Decimal digits beyond what an
  /// int64 denominator can hold are rejected rather than rounded.
  static Rational parse(std::string_view text);

  [[nodiscard]] std::int64_t num() const { return num_; }
  [[nodiscard]] std::int64_t den() const { return den_; }
  [[nodiscard]] bool is_zero() const { return num_ == 0; }
  [[nodiscard]] bool is_integer() const { return den_ == 1; }

  [[nodiscard]] std::int64_t floor() const {
    std::int64_t q = num_ / den_;
    return (num_ % den_ != 0 && num_ < 0) ? q - 1 : q;
  }
  [[nodiscard]] std::int64_t ceil() const {
    std::int64_t q = num_ / den_;
    return (num_ % den_ != 0 && num_ > 0) ? q + 1 : q;
  }
  [[nodiscard]] double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  [[nodiscard]] std::string to_string() const {
    return den_ == 1 ? std::to_string(num_)
                     : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return make128(int128(a.num_) * b.den_ + int128(b.num_) * a.den_,
                   int128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return make128(int128(a.num_) * b.den_ - int128(b.num_) * a.den_,
                   int128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make128(int128(a.num_) * b.num_, int128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
    return make128(int128(a.num_) * b.den_, int128(a.den_) * b.num_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend bool operator<(const Rational& a, const Rational& b) {
    return int128(a.num_) * b.den_ < int128(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

 private:
  static Rational make(std::int64_t num, std::int64_t den) {
    return make128(num, den);
  }
  static Rational make128(int128 num, int128 den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    int128 g = gcd128(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
    if (num > int128(INT64_MAX) || num < int128(INT64_MIN) || den > int128(INT64_MAX))
      throw std::overflow_error("Rational: value exceeds 64-bit range");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }
  static int128 gcd128(int128 a, int128 b) {
    while (b != 0) { int128 t = a % b; a = b; b = t; }
    return a == 0 ? 1 : a;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Rational Rational::parse(std::string_view text) {
  auto fail = [&] {
    throw std::invalid_argument("Rational::parse: cannot parse '" + std::string(text) + "'");
  };
  if (text.empty()) fail();
  bool neg = false;
  std::size_t i = 0;
  if (text[i] == '+' || text[i] == '-') { neg = text[i] == '-'; ++i; }
  std::int64_t ipart = 0, frac = 0, fden = 1;
  bool any_digit = false;
  for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
    if (ipart > INT64_MAX / 10) throw std::overflow_error("Rational::parse: too many digits");
    ipart = ipart * 10 + (text[i] - '0');
    any_digit = true;
  }
  if (i < text.size() && text[i] == '/') {
    ++i;
    if (!any_digit || i >= text.size()) fail();
    std::int64_t den = 0;
    for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
      if (den > INT64_MAX / 10) throw std::overflow_error("Rational::parse: too many digits");
      den = den * 10 + (text[i] - '0');
    }
    if (i != text.size() || den == 0) fail();
    return Rational(neg ? -ipart : ipart, den);
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i) {
      if (fden > INT64_MAX / 10) throw std::overflow_error("Rational::parse: too many digits");
      frac = frac * 10 + (text[i] - '0');
      fden *= 10;
      any_digit = true;
    }
  }
  if (!any_digit || i != text.size()) fail();
  Rational r = Rational(ipart) + Rational(frac, fden);
  return neg ? Rational(0) - r : r;
}

}  // namespace chunkwise
