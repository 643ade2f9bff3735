#include "asymgame/numeric.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "asymgame/belief.hpp"

namespace asymgame {

namespace {
unsigned g_bigfloat_bits = 256;

unsigned digits10_for_bits(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 2;
}

const bool g_default_precision_applied = [] {
  bigfloat::default_precision(digits10_for_bits(256));
  return true;
}();
}  // namespace

void set_bigfloat_bits(unsigned bits) {
  if (bits < 24) throw std::invalid_argument("bigfloat precision must be at least 24 bits");
  g_bigfloat_bits = bits;
  bigfloat::default_precision(digits10_for_bits(bits));
  orbit_cache::clear();
}

unsigned bigfloat_bits() { return g_bigfloat_bits; }

precision_context parse_precision(const std::string& text) {
  precision_context ctx;
  if (text == "float64" || text == "double" || text.empty()) {
    ctx.mode = precision_mode::float64;
  } else if (text == "rational" || text == "exact") {
    ctx.mode = precision_mode::rational;
  } else if (text.rfind("bigfloat", 0) == 0) {
    ctx.mode = precision_mode::bigfloat;
    auto colon = text.find(':');
    if (colon != std::string::npos) {
      ctx.bits = static_cast<unsigned>(std::stoul(text.substr(colon + 1)));
      if (ctx.bits < 24) throw std::invalid_argument("bigfloat precision must be at least 24 bits");
    }
  } else {
    throw std::invalid_argument("unknown precision '" + text + "'");
  }
  return ctx;
}

std::string precision_name(const precision_context& ctx) {
  switch (ctx.mode) {
    case precision_mode::float64: return "float64";
    case precision_mode::bigfloat: return "bigfloat:" + std::to_string(ctx.bits);
    case precision_mode::rational: return "rational";
  }
  return "float64";
}

namespace {
void require_digits(const std::string& s, const std::string& whole) {
  if (s.empty()) throw std::invalid_argument("malformed number '" + whole + "'");
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("malformed number '" + whole + "'");
}
}  // namespace

rational parse_probability(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty probability literal");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    const std::string ns = text.substr(0, slash), ds = text.substr(slash + 1);
    require_digits(ns, text);
    require_digits(ds, text);
    bigint num(ns);
    bigint den(ds);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return rational(num) / rational(den);
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) {
    require_digits(text, text);
    return rational(bigint(text));
  }
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  std::size_t frac_len = text.size() - dot - 1;
  for (char c : digits)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("malformed decimal '" + text + "'");
  // GMP reads a leading zero as an octal prefix.
  const auto first = digits.find_first_not_of('0');
  digits = first == std::string::npos ? "0" : digits.substr(first);
  bigint den = 1;
  for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
  return rational(bigint(digits)) / rational(den);
}

double to_double(const bigfloat& x) { return x.convert_to<double>(); }
double to_double(const rational& x) { return x.convert_to<double>(); }

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_real(const bigfloat& x) {
  return x.str(digits10_for_bits(g_bigfloat_bits));
}

std::string format_real(const rational& x) {
  return boost::multiprecision::numerator(x).str() + "/" +
         boost::multiprecision::denominator(x).str();
}

}  // namespace asymgame
