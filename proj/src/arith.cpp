#include "betheperm/arith.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace betheperm {

Integer factorial(unsigned n) {
  Integer r = 1;
  for (unsigned k = 2; k <= n; ++k) r *= k;
  return r;
}

Integer binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  Integer r = 1;
  for (unsigned i = 0; i < k; ++i) {
    r *= n - i;
    r /= i + 1;
  }
  return r;
}

Integer ipow(const Integer& base, unsigned exp) {
  Integer r = 1;
  Integer b = base;
  while (exp > 0) {
    if (exp & 1u) r *= b;
    b *= b;
    exp >>= 1u;
  }
  return r;
}

double mth_root(const Rational& value, unsigned m) {
  if (m == 0) throw std::invalid_argument("mth_root: m must be positive");
  if (value < 0) throw std::invalid_argument("mth_root: negative value");
  if (value == 0) return 0.0;
  const double x = value.convert_to<double>();
  if (m == 1) return x;
  double r = std::exp(std::log(x) / static_cast<double>(m));
  const double rm1 = std::pow(r, static_cast<int>(m) - 1);
  if (std::isfinite(rm1) && rm1 != 0.0) {
    r -= (rm1 * r - x) / (static_cast<double>(m) * rm1);
  }
  return r;
}

std::string to_fraction_string(const Rational& value) {
  return numerator(value).str() + "/" + denominator(value).str();
}

std::string to_float_string(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace betheperm
