#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace curveprobe {

/// Exact fraction over 64-bit integers, always kept in lowest terms with a
/// positive denominator. Curvature terms have denominators bounded by
/// products of node degrees, so overflow is checked rather than expected.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_{0};
  std::int64_t den_{1};
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace curveprobe
