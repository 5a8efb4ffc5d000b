#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace sleeppe {

// Exact positive-or-zero rational used for sample rates and record durations.
// Always stored in lowest terms with a positive denominator.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  // Parses a decimal literal such as "30", "0.5" or "1e1" exactly.
  static Rational parse_decimal(std::string_view text);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool positive() const noexcept { return num_ > 0; }

  std::string to_string() const;

  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace sleeppe
