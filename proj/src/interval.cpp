#include "nodalcert/interval.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "nodalcert/errors.hpp"

namespace nodalcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMax = std::numeric_limits<double>::max();

// Below this magnitude FMA residuals may be inexact; results are nudged
// outward unconditionally.
constexpr double kTiny = 0x1p-900;

// Spouge parameter; the truncation bound for a = 15 is about 1.1e-13.
constexpr int kSpougeA = 15;

}  // namespace

Interval make_unchecked(double lo, double hi) { return {lo, hi, Interval::Unchecked{}}; }

namespace rounding {

double next_down(double x, int steps) {
  for (int i = 0; i < steps; ++i) x = std::nextafter(x, -kInf);
  return x;
}

double next_up(double x, int steps) {
  for (int i = 0; i < steps; ++i) x = std::nextafter(x, kInf);
  return x;
}

namespace {

// Sign of (exact a + b) - fl(a + b), via TwoSum.
double two_sum_err(double a, double b, double s) {
  const double bb = s - a;
  return (a - (s - bb)) + (b - bb);
}

// Overflow of finite operands: the exact value is finite, so the nearest
// result (+-inf) is only valid in one direction.
double clamp_overflow_down(double r) { return r > 0 ? kMax : r; }
double clamp_overflow_up(double r) { return r < 0 ? -kMax : r; }

}  // namespace

double add_down(double a, double b) {
  const double s = a + b;
  if (std::isinf(s)) return (std::isinf(a) || std::isinf(b)) ? s : clamp_overflow_down(s);
  return two_sum_err(a, b, s) < 0 ? next_down(s) : s;
}

double add_up(double a, double b) {
  const double s = a + b;
  if (std::isinf(s)) return (std::isinf(a) || std::isinf(b)) ? s : clamp_overflow_up(s);
  return two_sum_err(a, b, s) > 0 ? next_up(s) : s;
}

double sub_down(double a, double b) { return add_down(a, -b); }
double sub_up(double a, double b) { return add_up(a, -b); }

double mul_down(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  const double p = a * b;
  if (std::isinf(p)) return (std::isinf(a) || std::isinf(b)) ? p : clamp_overflow_down(p);
  if (std::abs(p) < kTiny) return next_down(p);
  return std::fma(a, b, -p) < 0 ? next_down(p) : p;
}

double mul_up(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  const double p = a * b;
  if (std::isinf(p)) return (std::isinf(a) || std::isinf(b)) ? p : clamp_overflow_up(p);
  if (std::abs(p) < kTiny) return next_up(p);
  return std::fma(a, b, -p) > 0 ? next_up(p) : p;
}

namespace {

// Sign of the exact quotient a/b minus q, or 0 when q is exact. Only valid
// for finite, non-tiny operands.
double div_err_sign(double a, double b, double q) {
  const double r = std::fma(-q, b, a);
  if (r == 0.0) return 0.0;
  return (r > 0) == (b > 0) ? 1.0 : -1.0;
}

}  // namespace

double div_down(double a, double b) {
  if (a == 0.0) return 0.0;
  const double q = a / b;
  if (std::isnan(q)) return -kInf;
  if (std::isinf(b)) return q == 0.0 ? ((a > 0) == (b > 0) ? 0.0 : -DBL_TRUE_MIN) : q;
  if (std::isinf(q)) return std::isinf(a) ? q : clamp_overflow_down(q);
  if (std::abs(q) < kTiny || std::abs(a) < kTiny) return next_down(q);
  return div_err_sign(a, b, q) < 0 ? next_down(q) : q;
}

double div_up(double a, double b) {
  if (a == 0.0) return 0.0;
  const double q = a / b;
  if (std::isnan(q)) return kInf;
  if (std::isinf(b)) return q == 0.0 ? ((a > 0) == (b > 0) ? DBL_TRUE_MIN : 0.0) : q;
  if (std::isinf(q)) return std::isinf(a) ? q : clamp_overflow_up(q);
  if (std::abs(q) < kTiny || std::abs(a) < kTiny) return next_up(q);
  return div_err_sign(a, b, q) > 0 ? next_up(q) : q;
}

double sqrt_down(double a) {
  if (a <= 0.0) return 0.0;
  if (std::isinf(a)) return a;
  const double s = std::sqrt(a);
  if (a < kTiny) return std::max(0.0, next_down(s));
  return std::fma(-s, s, a) < 0 ? next_down(s) : s;
}

double sqrt_up(double a) {
  if (a <= 0.0) return 0.0;
  if (std::isinf(a)) return a;
  const double s = std::sqrt(a);
  if (a < kTiny) return next_up(s);
  return std::fma(-s, s, a) > 0 ? next_up(s) : s;
}

}  // namespace rounding

using namespace rounding;

Interval::Interval(double value) : lo_(value), hi_(value) {
  if (!std::isfinite(value)) throw DomainError("point interval must be finite");
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (std::isnan(lo) || std::isnan(hi)) throw DomainError("interval endpoint is NaN");
  if (lo > hi) throw DomainError("interval with lo > hi");
  if (lo == kInf || hi == -kInf) throw DomainError("interval is empty at infinity");
}

double Interval::mid() const {
  if (std::isinf(lo_) || std::isinf(hi_)) {
    if (std::isinf(lo_) && std::isinf(hi_)) return 0.0;
    return std::isinf(lo_) ? -kMax : kMax;
  }
  return lo_ + 0.5 * (hi_ - lo_);
}

double Interval::width() const { return sub_up(hi_, lo_); }
double Interval::rad() const { return mul_up(0.5, width()); }
double Interval::mag() const { return std::max(std::abs(lo_), std::abs(hi_)); }
double Interval::mig() const {
  if (contains_zero()) return 0.0;
  return std::min(std::abs(lo_), std::abs(hi_));
}

Interval Interval::pi() {
  // M_PI is the nearest binary64 and lies below pi.
  static const Interval value = make_unchecked(3.141592653589793, next_up(3.141592653589793));
  return value;
}

Interval Interval::entire() { return make_unchecked(-kInf, kInf); }

Interval operator-(const Interval& a) { return make_unchecked(-a.hi(), -a.lo()); }

Interval operator+(const Interval& a, const Interval& b) {
  return make_unchecked(add_down(a.lo(), b.lo()), add_up(a.hi(), b.hi()));
}

Interval operator-(const Interval& a, const Interval& b) {
  return make_unchecked(sub_down(a.lo(), b.hi()), sub_up(a.hi(), b.lo()));
}

Interval operator*(const Interval& a, const Interval& b) {
  const double al = a.lo(), ah = a.hi(), bl = b.lo(), bh = b.hi();
  if (al >= 0 && bl >= 0) return make_unchecked(mul_down(al, bl), mul_up(ah, bh));
  if (ah <= 0 && bh <= 0) return make_unchecked(mul_down(ah, bh), mul_up(al, bl));
  if (al >= 0 && bh <= 0) return make_unchecked(mul_down(ah, bl), mul_up(al, bh));
  if (ah <= 0 && bl >= 0) return make_unchecked(mul_down(al, bh), mul_up(ah, bl));
  const double lo = std::min({mul_down(al, bl), mul_down(al, bh), mul_down(ah, bl), mul_down(ah, bh)});
  const double hi = std::max({mul_up(al, bl), mul_up(al, bh), mul_up(ah, bl), mul_up(ah, bh)});
  return make_unchecked(lo, hi);
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw DivisionByZeroInterval("divisor interval contains zero: " + to_string(b));
  const double al = a.lo(), ah = a.hi(), bl = b.lo(), bh = b.hi();
  const double lo = std::min({div_down(al, bl), div_down(al, bh), div_down(ah, bl), div_down(ah, bh)});
  const double hi = std::max({div_up(al, bl), div_up(al, bh), div_up(ah, bl), div_up(ah, bh)});
  return make_unchecked(lo, hi);
}

Interval& operator+=(Interval& a, const Interval& b) { return a = a + b; }
Interval& operator-=(Interval& a, const Interval& b) { return a = a - b; }
Interval& operator*=(Interval& a, const Interval& b) { return a = a * b; }
Interval& operator/=(Interval& a, const Interval& b) { return a = a / b; }

Interval hull(const Interval& a, const Interval& b) {
  return make_unchecked(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  const double lo = std::max(a.lo(), b.lo());
  const double hi = std::min(a.hi(), b.hi());
  if (lo > hi) return std::nullopt;
  return make_unchecked(lo, hi);
}

Interval abs(const Interval& a) {
  if (a.lo() >= 0) return a;
  if (a.hi() <= 0) return -a;
  return make_unchecked(0.0, a.mag());
}

Interval sqr(const Interval& a) { return pow(a, 2.0); }

Interval sqrt(const Interval& a) {
  if (a.lo() < 0) throw DomainError("sqrt of interval with negative part: " + to_string(a));
  return make_unchecked(sqrt_down(a.lo()), sqrt_up(a.hi()));
}

namespace {

// x^n for x >= 0 by binary powering; each partial product is rounded in the
// same direction, which is sound because all factors are nonnegative.
double ipow_down(double x, unsigned long n) {
  double result = 1.0;
  double base = x;
  while (n != 0) {
    if (n & 1UL) result = mul_down(result, base);
    n >>= 1;
    if (n != 0) base = mul_down(base, base);
  }
  return result;
}

double ipow_up(double x, unsigned long n) {
  double result = 1.0;
  double base = x;
  while (n != 0) {
    if (n & 1UL) result = mul_up(result, base);
    n >>= 1;
    if (n != 0) base = mul_up(base, base);
  }
  return result;
}

bool is_integer(double r) { return std::isfinite(r) && r == std::floor(r) && std::abs(r) < 0x1p31; }

// Enclosure of x^y for point x >= 0 and point y.
Interval pow_point(double x, double y) {
  if (y == 0.0 || x == 1.0) return Interval(1.0);
  if (x == 0.0) {
    if (y > 0) return Interval(0.0);
    throw DomainError("0 raised to a negative power");
  }
  const double v = std::pow(x, y);
  double lo = std::max(0.0, next_down(v, kLibmUlps));
  double hi = next_up(v, kLibmUlps);
  return make_unchecked(lo, hi);
}

Interval pow_integer(const Interval& a, unsigned long n) {
  if (n == 0) return Interval(1.0);
  const double al = a.lo(), ah = a.hi();
  if (n % 2 == 0) {
    if (al >= 0) return make_unchecked(ipow_down(al, n), ipow_up(ah, n));
    if (ah <= 0) return make_unchecked(ipow_down(-ah, n), ipow_up(-al, n));
    return make_unchecked(0.0, ipow_up(a.mag(), n));
  }
  const double lo = al >= 0 ? ipow_down(al, n) : -ipow_up(-al, n);
  const double hi = ah >= 0 ? ipow_up(ah, n) : -ipow_down(-ah, n);
  return make_unchecked(lo, hi);
}

}  // namespace

Interval pow(const Interval& a, double r) {
  if (std::isnan(r)) throw DomainError("pow with NaN exponent");
  if (r == 0.0) return Interval(1.0);
  if (is_integer(r)) {
    if (r > 0) return pow_integer(a, static_cast<unsigned long>(r));
    return Interval(1.0) / pow_integer(a, static_cast<unsigned long>(-r));
  }
  if (a.lo() < 0) throw DomainError("non-integer power of interval with negative part: " + to_string(a));
  if (r < 0) {
    if (a.lo() == 0.0) throw DomainError("negative power of interval containing zero");
    return Interval(1.0) / pow(a, -r);
  }
  if (r == 0.5) return sqrt(a);
  return make_unchecked(pow_point(a.lo(), r).lo(), pow_point(a.hi(), r).hi());
}

Interval pow(const Interval& a, const Interval& y) {
  if (y.is_point()) return pow(a, y.lo());
  if (a.lo() < 0) throw DomainError("pow with interval exponent needs a nonnegative base");
  if (a.lo() == 0.0 && y.lo() <= 0.0) throw DomainError("pow 0^y with y possibly nonpositive");
  // x^y is monotone in each argument separately on this box, so the range is
  // attained at the corners.
  double lo = kInf, hi = -kInf;
  for (double x : {a.lo(), a.hi()}) {
    for (double e : {y.lo(), y.hi()}) {
      Interval v = std::isinf(x) ? (e > 0 ? make_unchecked(kMax, kInf) : (e < 0 ? Interval(0.0) : Interval(1.0)))
                                 : pow_point(x, e);
      lo = std::min(lo, v.lo());
      hi = std::max(hi, v.hi());
    }
  }
  return make_unchecked(lo, hi);
}

Interval exp(const Interval& a) {
  const double lo = a.lo() == -kInf ? 0.0 : std::max(0.0, next_down(std::exp(a.lo()), kLibmUlps));
  const double hi = a.hi() == kInf ? kInf : next_up(std::exp(a.hi()), kLibmUlps);
  return make_unchecked(lo, hi);
}

Interval log(const Interval& a) {
  if (a.lo() < 0) throw DomainError("log of interval with negative part: " + to_string(a));
  const double lo = a.lo() == 0.0 ? -kInf : next_down(std::log(a.lo()), kLibmUlps);
  const double hi = a.hi() == 0.0 ? next_down(-kMax) : (a.hi() == kInf ? kInf : next_up(std::log(a.hi()), kLibmUlps));
  return make_unchecked(lo, hi);
}

Interval cos(const Interval& a) {
  const Interval full = make_unchecked(-1.0, 1.0);
  if (std::isinf(a.lo()) || std::isinf(a.hi())) return full;
  const Interval pi = Interval::pi();
  if (a.width() >= 2.0 * pi.lo()) return full;

  double lo = std::min(std::cos(a.lo()), std::cos(a.hi()));
  double hi = std::max(std::cos(a.lo()), std::cos(a.hi()));
  lo = next_down(lo, kLibmUlps);
  hi = next_up(hi, kLibmUlps);

  // cos is monotone between consecutive multiples of pi; add the extremum
  // (-1)^j whenever j*pi may lie inside a.
  const double first = std::floor(a.lo() / pi.hi()) - 1.0;
  const double last = std::ceil(a.hi() / pi.lo()) + 1.0;
  for (double j = first; j <= last; j += 1.0) {
    const Interval jpi = Interval(j) * pi;
    if (jpi.hi() < a.lo() || jpi.lo() > a.hi()) continue;
    if (std::fmod(std::abs(j), 2.0) == 0.0) {
      hi = 1.0;
    } else {
      lo = -1.0;
    }
  }
  return make_unchecked(std::max(-1.0, lo), std::min(1.0, hi));
}

Interval acos(const Interval& a) {
  const auto b = intersect(a, make_unchecked(-1.0, 1.0));
  if (!b) throw DomainError("acos argument outside [-1, 1]: " + to_string(a));
  const double pi_hi = Interval::pi().hi();
  const double lo = std::max(0.0, next_down(std::acos(b->hi()), kLibmUlps));
  const double hi = std::min(pi_hi, next_up(std::acos(b->lo()), kLibmUlps));
  return make_unchecked(lo, hi);
}

Interval atan(const Interval& a) {
  const double half_pi = mul_up(0.5, Interval::pi().hi());
  const double lo = std::max(-half_pi, next_down(std::atan(a.lo()), kLibmUlps));
  const double hi = std::min(half_pi, next_up(std::atan(a.hi()), kLibmUlps));
  return make_unchecked(lo, hi);
}

namespace {

struct SpougeTable {
  Interval c0;
  std::array<Interval, kSpougeA> c{};  // c[k] for k = 1 .. a-1
  double relative_error = 0.0;
};

const SpougeTable& spouge_table() {
  static const SpougeTable table = [] {
    SpougeTable t;
    t.c0 = sqrt(Interval(2.0) * Interval::pi());
    Interval factorial(1.0);
    for (int k = 1; k < kSpougeA; ++k) {
      if (k > 1) factorial *= Interval(static_cast<double>(k - 1));
      const Interval base(static_cast<double>(kSpougeA - k));
      // (a - k)^{k - 1/2} = (a - k)^{k-1} sqrt(a - k), exact integer base.
      const Interval power = pow(base, static_cast<double>(k - 1)) * sqrt(base);
      Interval term = power * exp(base) / factorial;
      if (k % 2 == 0) term = -term;
      t.c[static_cast<std::size_t>(k)] = term;
    }
    const Interval a(static_cast<double>(kSpougeA));
    const Interval bound = Interval(1.0) / (sqrt(a) * pow(Interval(2.0) * Interval::pi(), a + Interval(0.5)));
    t.relative_error = next_up(bound.hi(), 2);
    return t;
  }();
  return table;
}

// Gamma(y) for y inside (roughly) [2, 3].
Interval gamma_window(const Interval& y) {
  const SpougeTable& t = spouge_table();
  const Interval z = y - Interval(1.0);
  Interval sum = t.c0;
  for (int k = 1; k < kSpougeA; ++k) sum += t.c[static_cast<std::size_t>(k)] / (z + Interval(static_cast<double>(k)));
  const Interval za = z + Interval(static_cast<double>(kSpougeA));
  const Interval value = pow(za, z + Interval(0.5)) * exp(-za) * sum;
  const Interval slack = make_unchecked(sub_down(1.0, t.relative_error), add_up(1.0, t.relative_error));
  return value * slack;
}

Interval gamma_point(double x) {
  if (x >= 2.0 && x < 3.0) return gamma_window(Interval(x));
  if (x < 2.0) {
    const int steps = static_cast<int>(std::ceil(2.0 - x));
    Interval denom(1.0);
    Interval shifted(x);
    for (int k = 0; k < steps; ++k) {
      denom *= shifted;
      shifted += Interval(1.0);
    }
    return gamma_window(shifted) / denom;
  }
  const double steps = std::floor(x - 2.0);
  if (steps > 400) return make_unchecked(kMax, kInf);
  Interval factor(1.0);
  Interval shifted(x);
  for (int k = 0; k < static_cast<int>(steps); ++k) {
    shifted -= Interval(1.0);
    factor *= shifted;
  }
  return gamma_window(shifted) * factor;
}

// Gamma attains its minimum on (0, inf) at x0 = 1.46163214496836...
constexpr double kGammaMinArgLo = 1.4616321449;
constexpr double kGammaMinArgHi = 1.4616321450;
constexpr double kGammaMinValueLo = 0.8856031944;

}  // namespace

double spouge_relative_error_bound() { return spouge_table().relative_error; }

Interval gamma(const Interval& a) {
  if (!(a.lo() > 0)) throw DomainError("gamma requires a positive argument: " + to_string(a));
  if (std::isinf(a.hi())) {
    return make_unchecked(a.lo() >= kGammaMinArgHi ? gamma_point(a.lo()).lo() : kGammaMinValueLo, kInf);
  }
  const Interval g_lo = gamma_point(a.lo());
  if (a.is_point()) return g_lo;
  const Interval g_hi = gamma_point(a.hi());
  if (a.hi() <= kGammaMinArgLo) return make_unchecked(g_hi.lo(), g_lo.hi());
  if (a.lo() >= kGammaMinArgHi) return make_unchecked(g_lo.lo(), g_hi.hi());
  return make_unchecked(kGammaMinValueLo, std::max(g_lo.hi(), g_hi.hi()));
}

std::string to_string(const Interval& a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "[%.17g, %.17g]", a.lo(), a.hi());
  return buf;
}

std::ostream& operator<<(std::ostream& os, const Interval& a) { return os << to_string(a); }

}  // namespace nodalcert
