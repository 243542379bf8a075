#pragma once

// Closed binary64 intervals with outward rounding.
//
// Rounding strategy: the FPU stays in round-to-nearest. Each elementary
// operation computes the nearest result and then recovers the sign of the
// rounding error with an error-free transformation (TwoSum for +/-, FMA
// residuals for *, / and sqrt). The endpoint is moved one ulp outward only
// when the nearest result lies on the wrong side of the exact value, so
// exactly representable results stay exact. Results near the underflow range,
// where the FMA residual is not exact, are nudged unconditionally.
//
// exp, log, pow (non-integer exponents), cos, acos and atan delegate to libm
// and widen the result by kLibmUlps ulps on each side. This relies on the
// host libm keeping these functions within 1 ulp, which glibc documents for
// x86_64.
//
// No global rounding-mode state is touched, so every function is safe to call
// concurrently.

#include <iosfwd>
#include <optional>
#include <string>

namespace nodalcert {

inline constexpr int kLibmUlps = 2;

class Interval {
 public:
  constexpr Interval() = default;
  // A point interval. Throws DomainError for NaN or infinite values.
  Interval(double value);  // NOLINT(google-explicit-constructor)
  // Throws DomainError when lo > hi, an endpoint is NaN, lo == +inf or
  // hi == -inf.
  Interval(double lo, double hi);

  [[nodiscard]] double lo() const { return lo_; }
  [[nodiscard]] double hi() const { return hi_; }

  // Midpoint rounded to nearest; not an enclosure of anything.
  [[nodiscard]] double mid() const;
  // Upper bound on hi - lo.
  [[nodiscard]] double width() const;
  // Upper bound on the half-width.
  [[nodiscard]] double rad() const;
  // max |x| over the interval (exact).
  [[nodiscard]] double mag() const;
  // min |x| over the interval (exact).
  [[nodiscard]] double mig() const;

  [[nodiscard]] bool contains(double x) const { return lo_ <= x && x <= hi_; }
  [[nodiscard]] bool contains_zero() const { return lo_ <= 0.0 && 0.0 <= hi_; }
  [[nodiscard]] bool subset_of(const Interval& other) const {
    return other.lo_ <= lo_ && hi_ <= other.hi_;
  }
  [[nodiscard]] bool is_point() const { return lo_ == hi_; }

  static Interval pi();
  static Interval entire();

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  struct Unchecked {};
  constexpr Interval(double lo, double hi, Unchecked) : lo_(lo), hi_(hi) {}
  friend Interval make_unchecked(double lo, double hi);

  double lo_ = 0.0;
  double hi_ = 0.0;
};

// Directed-rounding scalar primitives. Each returns a binary64 value that is
// <= (down) or >= (up) the exact real result.
namespace rounding {
double add_down(double a, double b);
double add_up(double a, double b);
double sub_down(double a, double b);
double sub_up(double a, double b);
double mul_down(double a, double b);
double mul_up(double a, double b);
double div_down(double a, double b);
double div_up(double a, double b);
double sqrt_down(double a);
double sqrt_up(double a);
double next_down(double x, int steps = 1);
double next_up(double x, int steps = 1);
}  // namespace rounding

Interval operator-(const Interval& a);
Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
// Throws DivisionByZeroInterval when 0 is in b.
Interval operator/(const Interval& a, const Interval& b);

Interval& operator+=(Interval& a, const Interval& b);
Interval& operator-=(Interval& a, const Interval& b);
Interval& operator*=(Interval& a, const Interval& b);
Interval& operator/=(Interval& a, const Interval& b);

Interval hull(const Interval& a, const Interval& b);
std::optional<Interval> intersect(const Interval& a, const Interval& b);
Interval abs(const Interval& a);
Interval sqr(const Interval& a);
// Throws DomainError when a.lo() < 0.
Interval sqrt(const Interval& a);

// x^r for a real exponent. Integer exponents use repeated multiplication and
// treat the even case through zero; r == 0.5 uses sqrt. Non-integer r
// requires a.lo() >= 0 (DomainError otherwise). Negative r requires 0 not in
// a and is evaluated as 1 / x^|r|.
Interval pow(const Interval& a, double r);
// x^y with an interval exponent; requires a.lo() >= 0, and a.lo() > 0 unless
// y.lo() > 0.
Interval pow(const Interval& a, const Interval& y);

Interval exp(const Interval& a);
// Throws DomainError when a.lo() < 0; returns -inf as lower endpoint at 0.
Interval log(const Interval& a);
Interval cos(const Interval& a);
// acos on a ∩ [-1, 1]; DomainError if that intersection is empty.
Interval acos(const Interval& a);
Interval atan(const Interval& a);

// Gamma function enclosure for a.lo() > 0 (DomainError otherwise).
// Spouge's approximation on the window [2, 3) with its truncation bound added
// as relative slack; arguments are moved into the window with the recurrence
// Gamma(x + 1) = x Gamma(x).
Interval gamma(const Interval& a);

// Relative truncation bound a^{-1/2} (2 pi)^{-(a + 1/2)} of Spouge's formula
// for the parameter used by gamma().
double spouge_relative_error_bound();

std::ostream& operator<<(std::ostream& os, const Interval& a);
std::string to_string(const Interval& a);

}  // namespace nodalcert
