#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace commlens {

// Exact fraction with 64-bit numerator/denominator, kept normalized
// (gcd == 1, denominator > 0). Arithmetic uses 128-bit intermediates and
// throws std::overflow_error rather than wrap. Betweenness scores on
// e-mail-scale graphs stay far below these bounds.
class Ratio {
 public:
  constexpr Ratio() = default;
  constexpr Ratio(std::int64_t n) : num_(n) {}
  Ratio(std::int64_t num, std::int64_t den) : num_(num), den_(den) { normalize(); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Ratio operator+(const Ratio& a, const Ratio& b) {
    const std::int64_t g = std::gcd(a.den_, b.den_);
    const __int128 lhs = static_cast<__int128>(a.num_) * (b.den_ / g);
    const __int128 rhs = static_cast<__int128>(b.num_) * (a.den_ / g);
    const __int128 den = static_cast<__int128>(a.den_) * (b.den_ / g);
    return from_wide(lhs + rhs, den);
  }

  friend Ratio operator-(const Ratio& a, const Ratio& b) { return a + Ratio(-b.num_, b.den_); }

  friend Ratio operator*(const Ratio& a, const Ratio& b) {
    const std::int64_t g1 = std::gcd(a.num_ < 0 ? -a.num_ : a.num_, b.den_);
    const std::int64_t g2 = std::gcd(b.num_ < 0 ? -b.num_ : b.num_, a.den_);
    const __int128 num = static_cast<__int128>(a.num_ / g1) * (b.num_ / g2);
    const __int128 den = static_cast<__int128>(a.den_ / g2) * (b.den_ / g1);
    return from_wide(num, den);
  }

  friend Ratio operator/(const Ratio& a, const Ratio& b) {
    if (b.num_ == 0) throw std::domain_error("Ratio: division by zero");
    return a * Ratio(b.den_, b.num_);
  }

  Ratio& operator+=(const Ratio& o) { return *this = *this + o; }
  Ratio& operator-=(const Ratio& o) { return *this = *this - o; }
  Ratio& operator*=(const Ratio& o) { return *this = *this * o; }

  bool operator==(const Ratio& o) const { return num_ == o.num_ && den_ == o.den_; }

  std::strong_ordering operator<=>(const Ratio& o) const {
    const __int128 lhs = static_cast<__int128>(num_) * o.den_;
    const __int128 rhs = static_cast<__int128>(o.num_) * den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  static Ratio from_wide(__int128 num, __int128 den) {
    if (den == 0) throw std::domain_error("Ratio: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const __int128 a = num < 0 ? -num : num;
    __int128 g = gcd128(a, den);
    if (g == 0) g = 1;
    num /= g;
    den /= g;
    constexpr __int128 lo = INT64_MIN, hi = INT64_MAX;
    if (num < lo || num > hi || den > hi) throw std::overflow_error("Ratio: 64-bit overflow");
    Ratio r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  void normalize() {
    const Ratio r = from_wide(num_, den_);
    num_ = r.num_;
    den_ = r.den_;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace commlens
