#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace betheperm {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

Integer factorial(unsigned n);
Integer binomial(unsigned n, unsigned k);
Integer ipow(const Integer& base, unsigned exp);

/// M-th root of a non-negative rational in binary64: exp(ln(x)/m) seed
/// followed by one Newton step on r^m = x.
double mth_root(const Rational& value, unsigned m);

/// Serializes as "p/q" (q always present, never a decimal point).
std::string to_fraction_string(const Rational& value);

/// 17 significant digits, round-trip safe for binary64.
std::string to_float_string(double value);

}  // namespace betheperm
