#include "crio/angles.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace crio {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double parse_number(std::string_view s, std::string_view whole) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || s.empty()) {
    throw std::invalid_argument("bad angle: '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double angle_distance(double a, double b) {
  const double d = wrap_angle(a - b);
  return std::min(d, kTwoPi - d);
}

double parse_angle(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  const auto pi_at = s.find("pi");
  if (pi_at == std::string_view::npos) return parse_number(s, text);

  std::string_view coeff = s.substr(0, pi_at);
  std::string_view rest = s.substr(pi_at + 2);
  if (!coeff.empty() && coeff.back() == '*') coeff.remove_suffix(1);
  double scale = 1.0;
  if (coeff == "-") {
    scale = -1.0;
  } else if (!coeff.empty() && coeff != "+") {
    scale = parse_number(coeff.front() == '+' ? coeff.substr(1) : coeff, text);
  }
  if (!rest.empty()) {
    if (rest.front() != '/') {
      throw std::invalid_argument("bad angle: '" + std::string(text) + "'");
    }
    const double den = parse_number(rest.substr(1), text);
    if (den == 0.0) {
      throw std::invalid_argument("bad angle: '" + std::string(text) + "'");
    }
    scale /= den;
  }
  return scale * std::numbers::pi;
}

std::string format_angle(double a) {
  const double eighths = a / (std::numbers::pi / 8);
  const double k = std::round(eighths);
  if (std::abs(eighths - k) <= 1e-9) {
    long num = static_cast<long>(k);
    if (num == 0) return "0";
    long den = 8;
    const long g = std::gcd(std::abs(num), den);
    num /= g;
    den /= g;
    std::string out = num == 1 ? "" : num == -1 ? "-" : std::to_string(num);
    out += "pi";
    if (den != 1) out += "/" + std::to_string(den);
    return out;
  }
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(9);
  os << a;
  return os.str();
}

}  // namespace crio
