#pragma once

// Legendre tensor basis on rectangles.
//
// Along each axis the basis is phi_n(x) = x(1-x) Q_n'(x) / (n(n+1)), n >= 1,
// on the reference interval [0, 1], with Q_n the shifted Legendre polynomial.
// Equivalently, with t = 2x - 1 and P_n the Legendre polynomial,
//   phi_n(x)  = (P_{n-1}(t) - P_{n+1}(t)) / (2(2n+1)),
//   phi_n'(x) = -P_n(t),
//   phi_n''(x) = -2 P_n'(t).
// A field is u(x, y) = sum_{i,j} u_{i,j} phi_i(xr) phi_j(yr) where (xr, yr)
// are reference coordinates of (x, y) in the field's rectangle.

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "nodalcert/interval.hpp"

namespace nodalcert {

struct Rectangle {
  double ax = 0.0, bx = 1.0, ay = 0.0, by = 1.0;

  // Throws DomainError unless ax < bx and ay < by, all finite.
  static Rectangle make(double ax, double bx, double ay, double by);
  static Rectangle unit() { return {0.0, 1.0, 0.0, 1.0}; }

  [[nodiscard]] Interval width() const { return Interval(bx) - Interval(ax); }
  [[nodiscard]] Interval height() const { return Interval(by) - Interval(ay); }
  [[nodiscard]] Interval area() const { return width() * height(); }
  [[nodiscard]] bool contains(const Rectangle& r) const {
    return ax <= r.ax && r.bx <= bx && ay <= r.ay && r.by <= by;
  }
  friend bool operator==(const Rectangle&, const Rectangle&) = default;
};

class CoefficientField {
 public:
  // coeffs is mu*mu values, row-major in (i, j): coeffs[(i-1)*mu + (j-1)] is
  // u_{i,j}, i the x index. Throws DomainError for mu < 1, a size mismatch or
  // non-finite coefficients.
  CoefficientField(int mu, std::vector<double> coeffs, Rectangle domain);

  static CoefficientField zero(int mu, Rectangle domain = Rectangle::unit());

  [[nodiscard]] int mu() const { return mu_; }
  [[nodiscard]] const Rectangle& domain() const { return domain_; }
  [[nodiscard]] const std::vector<double>& coeffs() const { return coeffs_; }
  // 1-based indices.
  [[nodiscard]] double coeff(int i, int j) const { return coeffs_[(i - 1) * mu_ + (j - 1)]; }

 private:
  int mu_;
  std::vector<double> coeffs_;
  Rectangle domain_;
};

// Coefficient file I/O. Format:
//   MU <n>
//   DOMAIN <ax> <bx> <ay> <by>
//   [BASIS LEGENDRE]
//   n*n coefficients, row-major, whitespace separated
// Lines starting with '#' are ignored. Throws ParseError.
CoefficientField read_coefficients(std::istream& in);
CoefficientField load_coefficients(const std::string& path);
void write_coefficients(std::ostream& out, const CoefficientField& field);
void save_coefficients(const std::string& path, const CoefficientField& field);

// Enclosures of P_0(t), ..., P_nmax(t) for all t in the interval; t must meet
// [-1, 1] (it is clipped to it).
std::vector<Interval> legendre_enclosures(int nmax, const Interval& t);

// Enclosure of phi_n(x) for x in the interval; x is clipped to [0, 1].
// Throws DomainError for n < 1 or x disjoint from [0, 1].
Interval phi_eval(int n, const Interval& x);

// Enclosure of phi_n'(x) (derivative in the reference coordinate).
Interval dphi_eval(int n, const Interval& x);

// Per-axis enclosures for a reference interval X ⊆ [0, 1], used by the range
// enclosure. Index k holds basis function k + 1.
struct AxisEnclosure {
  Interval set;                     // X
  Interval offset;                  // X - center, a superset of it
  std::vector<Interval> phi_center; // phi_n(center)
  std::vector<Interval> phi;        // phi_n(X)
  std::vector<Interval> dphi;       // phi_n'(X)
};
AxisEnclosure axis_enclosure(int mu, const Interval& ref);

// Partial contractions of the coefficient matrix against one axis.
struct RowContraction {  // over j for a y enclosure
  std::vector<Interval> at_center;  // sum_j u_ij phi_j(cy)
  std::vector<Interval> over_set;   // sum_j u_ij phi_j(Y)
};
struct ColumnContraction {  // over i for an x enclosure
  std::vector<Interval> over_set;   // sum_i u_ij phi_i(X)
};
RowContraction contract_rows(const CoefficientField& f, const AxisEnclosure& ay);
ColumnContraction contract_columns(const CoefficientField& f, const AxisEnclosure& ax);

// Range enclosure of u on X x Y (reference coordinates) from precomputed
// axis data: the mean-value form around the cell center intersected with
// the naive tensor extension.
Interval cell_range(const AxisEnclosure& ax, const ColumnContraction& cx,
                    const AxisEnclosure& ay, const RowContraction& ry);

// Reference-coordinate enclosure of a physical cell of the field's domain.
// Throws CellOutsideDomain.
std::pair<Interval, Interval> to_reference(const CoefficientField& f, const Rectangle& cell);

struct RangeRefinement {
  int depth = 0;       // bisections per axis
  double sigma = 0.0;  // refine while lo - sigma <= 0 <= hi + sigma
};

// Enclosure of {u(x, y) : (x, y) in cell}. Throws CellOutsideDomain.
Interval uhat_range(const CoefficientField& f, const Rectangle& cell,
                    RangeRefinement refine = {});

// Upper bound on (sum over cells of the integral of |u|^p)^{1/p}, using
// sup|u|^p * area per cell. Throws CellOutsideDomain, DomainError for p <= 1.
double uhat_lp_upper(const CoefficientField& f, const std::vector<Rectangle>& cells, double p);

// Same bound from precomputed per-cell sup|u| bounds and physical areas.
double lp_upper_from_sups(const std::vector<double>& sups, const std::vector<double>& areas,
                          double p);

// Non-rigorous floating point evaluation at a physical point.
double point_eval(const CoefficientField& f, double x, double y);

struct PointDerivatives {
  double u, ux, uy, uxx, uyy;
};
PointDerivatives point_derivatives(const CoefficientField& f, double x, double y);

// Laplacian of u plus f(u) at a physical point.
double residual(const CoefficientField& field, const std::function<double(double)>& f, double x,
                double y);

// Floating point phi_n, phi_n', phi_n'' at a reference point for n = 1..mu.
struct BasisValues {
  std::vector<double> phi, dphi, ddphi;
};
BasisValues basis_values(int mu, double x);

}  // namespace nodalcert
