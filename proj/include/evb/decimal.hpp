#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace evb {

// Non-negative-or-negative fixed-point number with two fractional digits,
// stored as an integer count of hundredths. Sums are exact.
class Decimal {
 public:
  constexpr Decimal() = default;

  static constexpr Decimal from_hundredths(std::int64_t hundredths) {
    Decimal d;
    d.hundredths_ = hundredths;
    return d;
  }
  static constexpr Decimal from_integer(std::int64_t value) { return from_hundredths(value * 100); }

  // Accepts "7", "7.5", "-1", "0.25". Rejects more than two fractional
  // digits, exponents, and stray characters.
  static std::optional<Decimal> parse(std::string_view text);

  constexpr std::int64_t hundredths() const { return hundredths_; }
  double to_double() const { return static_cast<double>(hundredths_) / 100.0; }

  // Shortest canonical form: "7.5", "350", "0.25".
  std::string to_string() const;

  constexpr Decimal& operator+=(Decimal other) {
    hundredths_ += other.hundredths_;
    return *this;
  }
  friend constexpr Decimal operator+(Decimal a, Decimal b) { return a += b; }

  auto operator<=>(const Decimal&) const = default;

 private:
  std::int64_t hundredths_ = 0;
};

// Two decimal places, half away from zero: 24.135 -> "24.14", -0.005 -> "-0.01".
std::string format_fixed2(double value);

}  // namespace evb
