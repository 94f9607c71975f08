// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Fixed-point decimal numbers.
//
// All currency in the library is carried as Decimal<Digits>: a signed 64-bit
// integer count of 10^-Digits units. Addition and subtraction are exact and
// overflow-checked; products round half to even and are exact whenever the
// true product is representable. Comparisons are exact, which is what makes
// the hard budget check replayable bit for bit.

#ifndef EDGESPONSOR_DECIMAL_HPP_
#define EDGESPONSOR_DECIMAL_HPP_

#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace edgesponsor {

using int128 = __int128;

namespace detail {

constexpr std::int64_t pow10(int digits) {
  std::int64_t v = 1;
  for (int i = 0; i < digits; ++i) v *= 10;
  return v;
}

inline std::int64_t narrow(int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("decimal overflow");
  }
  return static_cast<std::int64_t>(v);
}

// floor(num / den) for den > 0.
constexpr int128 floor_div(int128 num, int128 den) {
  int128 q = num / den;
  if ((num % den != 0) && (num < 0)) --q;
  return q;
}

// num / den rounded half to even, den > 0.
constexpr int128 round_div(int128 num, int128 den) {
  int128 q = floor_div(num, den);
  int128 r = num - q * den;  // 0 <= r < den
  int128 twice = 2 * r;
  if (twice > den || (twice == den && (q % 2 != 0))) ++q;
  return q;
}

}  // namespace detail

template <int Digits>
class Decimal {
  static_assert(Digits >= 0 && Digits <= 12, "unsupported scale");

 public:
  using Raw = std::int64_t;
  static constexpr int kDigits = Digits;
  static constexpr Raw kScale = detail::pow10(Digits);

  constexpr Decimal() = default;

  static constexpr Decimal from_raw(Raw raw) {
    Decimal d;
    d.raw_ = raw;
    return d;
  }

  static Decimal from_integer(std::int64_t value) {
    return from_raw(detail::narrow(static_cast<int128>(value) * kScale));
  }

  // Nearest representable value; ties away from zero.
  static Decimal from_double(double value) {
    if (!std::isfinite(value)) {
      throw std::invalid_argument("decimal from non-finite double");
    }
    const double scaled = std::round(value * static_cast<double>(kScale));
    if (std::fabs(scaled) > 9.2e18) throw std::overflow_error("decimal overflow");
    return from_raw(static_cast<Raw>(scaled));
  }

  // Parses "[-]digits[.digits]". More than Digits fractional digits is an
  // error rather than a silent rounding.
  static Decimal parse(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty decimal");
    bool negative = false;
    std::size_t pos = 0;
    if (text[0] == '-' || text[0] == '+') {
      negative = text[0] == '-';
      pos = 1;
    }
    const std::size_t dot = text.find('.', pos);
    const std::string_view int_part =
        text.substr(pos, dot == std::string_view::npos ? text.size() - pos
                                                       : dot - pos);
    std::string_view frac_part;
    if (dot != std::string_view::npos) frac_part = text.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) {
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    }
    if (frac_part.size() > static_cast<std::size_t>(Digits)) {
      throw std::invalid_argument("too many fractional digits in '" +
                                  std::string(text) + "'");
    }
    int128 value = 0;
    for (char c : int_part) {
      if (c < '0' || c > '9') {
        throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
      }
      value = value * 10 + (c - '0');
      if (value > static_cast<int128>(std::numeric_limits<Raw>::max())) {
        throw std::overflow_error("decimal overflow");
      }
    }
    value *= kScale;
    int128 frac = 0;
    for (char c : frac_part) {
      if (c < '0' || c > '9') {
        throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
      }
      frac = frac * 10 + (c - '0');
    }
    for (std::size_t i = frac_part.size(); i < static_cast<std::size_t>(Digits); ++i) {
      frac *= 10;
    }
    value += frac;
    return from_raw(detail::narrow(negative ? -value : value));
  }

  constexpr Raw raw() const { return raw_; }
  double to_double() const {
    return static_cast<double>(raw_) / static_cast<double>(kScale);
  }
  constexpr bool is_integer() const { return raw_ % kScale == 0; }
  constexpr bool is_zero() const { return raw_ == 0; }

  // Shortest exact rendering: "3", "-0.25", "12.000001".
  std::string to_string() const {
    const bool negative = raw_ < 0;
    const int128 magnitude = negative ? -static_cast<int128>(raw_) : raw_;
    const auto whole = static_cast<std::uint64_t>(magnitude / kScale);
    auto frac = static_cast<std::uint64_t>(magnitude % kScale);
    std::string out = negative ? "-" : "";
    out += std::to_string(whole);
    if (frac != 0) {
      std::string digits(Digits, '0');
      for (int i = Digits - 1; i >= 0; --i) {
        digits[i] = static_cast<char>('0' + frac % 10);
        frac /= 10;
      }
      while (!digits.empty() && digits.back() == '0') digits.pop_back();
      out += '.';
      out += digits;
    }
    return out;
  }

  friend constexpr auto operator<=>(Decimal, Decimal) = default;
  friend constexpr bool operator==(Decimal, Decimal) = default;

  Decimal operator-() const { return from_raw(detail::narrow(-static_cast<int128>(raw_))); }

  friend Decimal operator+(Decimal a, Decimal b) {
    Raw out;
    if (__builtin_add_overflow(a.raw_, b.raw_, &out)) {
      throw std::overflow_error("decimal overflow");
    }
    return from_raw(out);
  }
  friend Decimal operator-(Decimal a, Decimal b) {
    Raw out;
    if (__builtin_sub_overflow(a.raw_, b.raw_, &out)) {
      throw std::overflow_error("decimal overflow");
    }
    return from_raw(out);
  }
  Decimal& operator+=(Decimal o) { return *this = *this + o; }
  Decimal& operator-=(Decimal o) { return *this = *this - o; }

  friend Decimal operator*(Decimal a, std::int64_t n) {
    return from_raw(detail::narrow(static_cast<int128>(a.raw_) * n));
  }
  friend Decimal operator*(std::int64_t n, Decimal a) { return a * n; }

  // Rounded half to even.
  friend Decimal operator*(Decimal a, Decimal b) {
    const int128 wide = static_cast<int128>(a.raw_) * b.raw_;
    return from_raw(detail::narrow(detail::round_div(wide, kScale)));
  }

  // Rounded half to even; b must be non-zero.
  friend Decimal operator/(Decimal a, Decimal b) {
    if (b.raw_ == 0) throw std::domain_error("decimal division by zero");
    int128 num = static_cast<int128>(a.raw_) * kScale;
    int128 den = b.raw_;
    if (den < 0) {
      num = -num;
      den = -den;
    }
    return from_raw(detail::narrow(detail::round_div(num, den)));
  }

  // Rounded toward negative infinity; n > 0.
  Decimal divide_floor(std::int64_t n) const {
    if (n <= 0) throw std::domain_error("decimal divide_floor by non-positive");
    return from_raw(detail::narrow(detail::floor_div(raw_, n)));
  }

  friend std::ostream& operator<<(std::ostream& os, Decimal d) {
    return os << d.to_string();
  }

 private:
  Raw raw_ = 0;
};

// How many whole copies of `unit` fit into `amount` (amount >= 0, unit > 0).
template <int D>
std::int64_t whole_units(Decimal<D> amount, Decimal<D> unit) {
  if (unit.raw() <= 0) throw std::domain_error("whole_units: non-positive unit");
  if (amount.raw() <= 0) return 0;
  return amount.raw() / unit.raw();
}

}  // namespace edgesponsor

#endif  // EDGESPONSOR_DECIMAL_HPP_
