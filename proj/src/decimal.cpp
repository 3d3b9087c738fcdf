#include "evb/decimal.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace evb {

std::optional<Decimal> Decimal::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  const auto whole = text.substr(0, dot);
  const auto frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (whole.empty() || frac.size() > 2) return std::nullopt;
  if (dot != std::string_view::npos && frac.empty()) return std::nullopt;
  // Keep well inside int64 once scaled by 100.
  if (whole.size() > 15) return std::nullopt;

  std::int64_t value = 0;
  for (char c : whole) {
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + (c - '0');
  }
  std::int64_t cents = 0;
  for (std::size_t i = 0; i < 2; ++i) {
    cents *= 10;
    if (i < frac.size()) {
      const char c = frac[i];
      if (c < '0' || c > '9') return std::nullopt;
      cents += c - '0';
    }
  }
  const std::int64_t total = value * 100 + cents;
  return from_hundredths(negative ? -total : total);
}

std::string Decimal::to_string() const {
  const bool negative = hundredths_ < 0;
  const std::uint64_t magnitude =
      negative ? static_cast<std::uint64_t>(-(hundredths_ + 1)) + 1 : static_cast<std::uint64_t>(hundredths_);
  std::string out = (negative ? "-" : "") + std::to_string(magnitude / 100);
  const auto cents = magnitude % 100;
  if (cents != 0) {
    out += '.';
    out += static_cast<char>('0' + cents / 10);
    if (cents % 10 != 0) out += static_cast<char>('0' + cents % 10);
  }
  return out;
}

std::string format_fixed2(double value) {
  const double scaled = std::round(value * 100.0);
  if (!std::isfinite(scaled) || std::fabs(scaled) > 9.0e15) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", value);
    return buf;
  }
  const auto cents = static_cast<std::int64_t>(scaled);
  const bool negative = cents < 0;
  const std::int64_t magnitude = negative ? -cents : cents;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%lld.%02lld", negative ? "-" : "",
                static_cast<long long>(magnitude / 100), static_cast<long long>(magnitude % 100));
  return buf;
}

}  // namespace evb
