#include "sleeppe/rational.hpp"

#include <cctype>
#include <numeric>

#include "sleeppe/error.hpp"

namespace sleeppe {
namespace {
__extension__ typedef __int128 wide_int;
}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorCode::InvalidParams, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g ? num / g : 0;
  den_ = g ? den / g : 1;
}

Rational Rational::parse_decimal(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';

  wide_int num = 0;
  std::int64_t den = 1;
  bool any_digit = false;
  bool in_fraction = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.' && !in_fraction) {
      in_fraction = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) break;
    any_digit = true;
    num = num * 10 + (c - '0');
    if (in_fraction) den *= 10;
    if (num > INT64_MAX || den > 1'000'000'000'000LL)
      throw Error(ErrorCode::NonNumericField, "decimal out of range: '" + std::string(text) + "'");
  }
  if (!any_digit) throw Error(ErrorCode::NonNumericField, "not a decimal: '" + std::string(text) + "'");

  int exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool exp_negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) exp_negative = text[i++] == '-';
    bool exp_digit = false;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      exp_digit = true;
      exponent = exponent * 10 + (text[i] - '0');
      if (exponent > 12) throw Error(ErrorCode::NonNumericField, "exponent out of range");
    }
    if (!exp_digit) throw Error(ErrorCode::NonNumericField, "bad exponent: '" + std::string(text) + "'");
    if (exp_negative) exponent = -exponent;
  }
  if (i != text.size()) throw Error(ErrorCode::NonNumericField, "not a decimal: '" + std::string(text) + "'");

  for (; exponent > 0; --exponent) num *= 10;
  for (; exponent < 0; ++exponent) den *= 10;
  if (num > INT64_MAX) throw Error(ErrorCode::NonNumericField, "decimal out of range");
  const auto n = static_cast<std::int64_t>(num);
  return Rational(negative ? -n : n, den);
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  const std::int64_t g1 = std::gcd(a.num_, b.den_);
  const std::int64_t g2 = std::gcd(b.num_, a.den_);
  const std::int64_t n1 = g1 ? a.num_ / g1 : 0, d2 = g1 ? b.den_ / g1 : b.den_;
  const std::int64_t n2 = g2 ? b.num_ / g2 : 0, d1 = g2 ? a.den_ / g2 : a.den_;
  return Rational(n1 * n2, d1 * d2);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw Error(ErrorCode::InvalidParams, "division by zero rational");
  return a * Rational(b.den_, b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const wide_int lhs = static_cast<wide_int>(a.num_) * b.den_;
  const wide_int rhs = static_cast<wide_int>(b.num_) * a.den_;
  return lhs <=> rhs;
}

}  // namespace sleeppe
