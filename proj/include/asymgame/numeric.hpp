#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <string>

namespace asymgame {

// Variable-precision float (MPFR) and exact rational (GMP) scalars.
// Expression templates are switched off so the types behave like plain
// value types inside the templated kernels.
using bigfloat = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                               boost::multiprecision::et_off>;
using rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using bigint = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

enum class precision_mode { float64, bigfloat, rational };

// Arithmetic context selected at the CLI / binding boundary.  The numeric
// kernels are templated on the scalar type; this picks the instantiation.
struct precision_context {
  precision_mode mode = precision_mode::float64;
  unsigned bits = 256;  // bigfloat mantissa bits
};

// Sets the default mantissa size for subsequently constructed bigfloats
// and drops cached orbits computed under the previous setting.
void set_bigfloat_bits(unsigned bits);
unsigned bigfloat_bits();

// "float64" | "bigfloat" | "bigfloat:<bits>" | "rational"
precision_context parse_precision(const std::string& text);
std::string precision_name(const precision_context& ctx);

// Parses a decimal literal ("0.73275300915"), a fraction ("3/4") or an
// integer into an exact rational.
rational parse_probability(const std::string& text);

inline double to_double(double x) { return x; }
double to_double(const bigfloat& x);
double to_double(const rational& x);

template <class R>
R from_rational(const rational& q);
template <>
inline double from_rational<double>(const rational& q) {
  return to_double(q);
}
template <>
inline bigfloat from_rational<bigfloat>(const rational& q) {
  return bigfloat(q);
}
template <>
inline rational from_rational<rational>(const rational& q) {
  return q;
}

std::string format_real(double x);            // 17 significant digits
std::string format_real(const bigfloat& x);   // precision-matched digits
std::string format_real(const rational& x);   // "num/den"

}  // namespace asymgame
