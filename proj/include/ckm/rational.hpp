#ifndef CKM_RATIONAL_HPP
#define CKM_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <string>

#include "ckm/instance.hpp"

namespace ckm {

/// Exact non-negative fraction num/den, kept reduced.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den < 0) num = -num, den = -den;
    const std::int64_t g = std::gcd(num, den);
    if (g > 1) num /= g, den /= g;
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Parses "0.01", "3", or "1/100" exactly.
inline Rational parse_rational(const std::string& text) {
  auto fail = [&]() -> Rational {
    throw Error(ErrorKind::kValidation, "not a rational number: '" + text + "'");
  };
  auto digits = [&](const std::string& s) {
    if (s.empty() || s.size() > 17) return false;
    for (char ch : s)
      if (ch < '0' || ch > '9') return false;
    return true;
  };
  if (auto slash = text.find('/'); slash != std::string::npos) {
    const std::string a = text.substr(0, slash), b = text.substr(slash + 1);
    if (!digits(a) || !digits(b) || std::stoll(b) == 0) return fail();
    return Rational(std::stoll(a), std::stoll(b));
  }
  const auto dot = text.find('.');
  const std::string whole = text.substr(0, dot);
  const std::string frac = dot == std::string::npos ? "" : text.substr(dot + 1);
  if (whole.empty() && frac.empty()) return fail();
  if ((!whole.empty() && !digits(whole)) || (!frac.empty() && !digits(frac))) return fail();
  if (whole.size() + frac.size() > 17) return fail();
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  const std::int64_t num = (whole.empty() ? 0 : std::stoll(whole)) * den +
                           (frac.empty() ? 0 : std::stoll(frac));
  return Rational(num, den);
}

}  // namespace ckm

#endif  // CKM_RATIONAL_HPP
