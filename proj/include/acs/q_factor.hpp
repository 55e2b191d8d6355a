#pragma once

#include <charconv>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace acs {

/// Dictionary overcompleteness Q as an exact fraction num/den, Q >= 1.
struct QFactor {
  long num = 1;
  long den = 1;

  constexpr QFactor() = default;
  constexpr QFactor(long numerator, long denominator = 1) : num(numerator), den(denominator) {
    if (den <= 0 || num <= 0) throw std::invalid_argument("QFactor: numerator and denominator must be positive");
    const long g = std::gcd(num, den);
    num /= g;
    den /= g;
    if (num < den) throw std::invalid_argument("QFactor: overcompleteness must be >= 1");
  }

  constexpr double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  /// Number of atoms QN for a signal of length n. QN must be an even integer.
  long atoms(long n) const {
    if (n <= 0) throw std::invalid_argument("QFactor: signal length must be positive");
    if ((n * num) % den != 0) {
      throw std::invalid_argument("QFactor: Q*N = " + str() + "*" + std::to_string(n) + " is not an integer");
    }
    const long qn = n * num / den;
    if (qn % 2 != 0) {
      throw std::invalid_argument("QFactor: Q*N = " + std::to_string(qn) + " is odd");
    }
    return qn;
  }

  std::string str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  }

  /// Accepts "3", "3/2" or a terminating decimal such as "1.5".
  static QFactor parse(std::string_view text) {
    auto parse_long = [&](std::string_view s) {
      long v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument("QFactor: cannot parse '" + std::string(text) + "'");
      }
      return v;
    };
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      return QFactor(parse_long(text.substr(0, slash)), parse_long(text.substr(slash + 1)));
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
      const auto frac = text.substr(dot + 1);
      if (frac.size() > 9) throw std::invalid_argument("QFactor: too many decimals in '" + std::string(text) + "'");
      long den = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
      const long whole = dot == 0 ? 0 : parse_long(text.substr(0, dot));
      const long part = frac.empty() ? 0 : parse_long(frac);
      return QFactor(whole * den + part, den);
    }
    return QFactor(parse_long(text), 1);
  }

  friend constexpr bool operator==(const QFactor&, const QFactor&) = default;
};

}  // namespace acs
