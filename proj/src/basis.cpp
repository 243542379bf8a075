#include "nodalcert/basis.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "nodalcert/errors.hpp"

namespace nodalcert {

Rectangle Rectangle::make(double ax, double bx, double ay, double by) {
  if (!(std::isfinite(ax) && std::isfinite(bx) && std::isfinite(ay) && std::isfinite(by)) ||
      !(ax < bx) || !(ay < by)) {
    throw DomainError("rectangle requires ax < bx and ay < by");
  }
  return {ax, bx, ay, by};
}

CoefficientField::CoefficientField(int mu, std::vector<double> coeffs, Rectangle domain)
    : mu_(mu), coeffs_(std::move(coeffs)), domain_(domain) {
  if (mu < 1) throw DomainError("coefficient field needs mu >= 1");
  if (coeffs_.size() != static_cast<std::size_t>(mu) * mu) {
    throw DomainError("coefficient count does not match mu*mu");
  }
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw DomainError("non-finite coefficient");
  }
  Rectangle::make(domain.ax, domain.bx, domain.ay, domain.by);
}

CoefficientField CoefficientField::zero(int mu, Rectangle domain) {
  return CoefficientField(mu, std::vector<double>(static_cast<std::size_t>(mu) * mu, 0.0), domain);
}

// ---------------------------------------------------------------------------
// Coefficient files

namespace {

double parse_double(std::string_view tok) {
  double v = 0.0;
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    throw ParseError("invalid number '" + std::string(tok) + "'");
  }
  return v;
}

long parse_int(std::string_view tok) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("invalid integer '" + std::string(tok) + "'");
  }
  return v;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

}  // namespace

CoefficientField read_coefficients(std::istream& in) {
  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto toks = split_ws(line);
    if (!toks.empty()) lines.push_back(std::move(toks));
  }
  std::size_t li = 0;
  if (li >= lines.size() || lines[li].size() != 2 || lines[li][0] != "MU") {
    throw ParseError("expected 'MU <n>' header");
  }
  const long mu = parse_int(lines[li][1]);
  if (mu < 1 || mu > 4096) throw ParseError("MU out of range");
  ++li;
  if (li >= lines.size() || lines[li].size() != 5 || lines[li][0] != "DOMAIN") {
    throw ParseError("expected 'DOMAIN ax bx ay by' header");
  }
  const double ax = parse_double(lines[li][1]), bx = parse_double(lines[li][2]);
  const double ay = parse_double(lines[li][3]), by = parse_double(lines[li][4]);
  if (!(ax < bx) || !(ay < by)) throw ParseError("degenerate DOMAIN");
  ++li;
  if (li < lines.size() && lines[li][0] == "BASIS") {
    if (lines[li].size() != 2 || lines[li][1] != "LEGENDRE") {
      throw ParseError("only 'BASIS LEGENDRE' is supported");
    }
    ++li;
  }
  std::vector<double> coeffs;
  coeffs.reserve(static_cast<std::size_t>(mu * mu));
  for (; li < lines.size(); ++li) {
    for (const auto& tok : lines[li]) coeffs.push_back(parse_double(tok));
  }
  if (coeffs.size() != static_cast<std::size_t>(mu * mu)) {
    throw ParseError("expected " + std::to_string(mu * mu) + " coefficients, found " +
                     std::to_string(coeffs.size()));
  }
  return CoefficientField(static_cast<int>(mu), std::move(coeffs), {ax, bx, ay, by});
}

CoefficientField load_coefficients(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open coefficient file " + path);
  return read_coefficients(in);
}

void write_coefficients(std::ostream& out, const CoefficientField& field) {
  char buf[128];
  const auto& d = field.domain();
  out << "MU " << field.mu() << "\n";
  std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g", d.ax, d.bx, d.ay, d.by);
  out << "DOMAIN " << buf << "\nBASIS LEGENDRE\n";
  for (int i = 1; i <= field.mu(); ++i) {
    for (int j = 1; j <= field.mu(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", field.coeff(i, j));
      out << (j > 1 ? " " : "") << buf;
    }
    out << "\n";
  }
}

void save_coefficients(const std::string& path, const CoefficientField& field) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write coefficient file " + path);
  write_coefficients(out, field);
}

// ---------------------------------------------------------------------------
// Rigorous basis enclosures

namespace {

const Interval kUnit(-1.0, 1.0);

// g_k = binom(2k, k) / 4^k, the coefficients of
// P_n(cos t) = sum_k g_k g_{n-k} cos((n - 2k) t).
std::vector<Interval> cos_sum_weights(int nmax) {
  std::vector<Interval> g(nmax + 1);
  g[0] = Interval(1.0);
  for (int k = 1; k <= nmax; ++k) g[k] = g[k - 1] * Interval(2.0 * k - 1) / Interval(2.0 * k);
  return g;
}

}  // namespace

std::vector<Interval> legendre_enclosures(int nmax, const Interval& t_in) {
  if (nmax < 0) throw DomainError("legendre_enclosures needs nmax >= 0");
  auto clipped = intersect(t_in, kUnit);
  if (!clipped) throw DomainError("Legendre argument outside [-1, 1]");
  const Interval t = *clipped;

  // Cosine-sum enclosure: its width grows linearly in n, unlike the interval
  // three-term recurrence, which is used below only on top of it.
  const Interval theta = acos(t);
  std::vector<Interval> cosk(nmax + 1);
  for (int k = 0; k <= nmax; ++k) cosk[k] = k == 0 ? Interval(1.0) : cos(Interval(k) * theta);
  const auto g = cos_sum_weights(nmax);

  std::vector<Interval> p(nmax + 1);
  for (int n = 0; n <= nmax; ++n) {
    Interval s(0.0);
    for (int k = 0; 2 * k < n; ++k) s += Interval(2.0) * g[k] * g[n - k] * cosk[n - 2 * k];
    if (n % 2 == 0) s += sqr(g[n / 2]);
    auto cs = intersect(s, kUnit);
    p[n] = cs ? *cs : kUnit;
  }
  if (nmax >= 1) {
    if (auto r = intersect(p[1], t)) p[1] = *r;
  }
  for (int k = 1; k < nmax; ++k) {
    const Interval rec =
        (Interval(2.0 * k + 1) * t * p[k] - Interval(k) * p[k - 1]) / Interval(k + 1.0);
    if (auto r = intersect(rec, p[k + 1])) p[k + 1] = *r;
  }
  return p;
}

namespace {

Interval clip_unit(const Interval& x) {
  auto c = intersect(x, Interval(0.0, 1.0));
  if (!c) throw DomainError("basis argument outside [0, 1]");
  return *c;
}

Interval phi_from_legendre(const std::vector<Interval>& p, int n) {
  return (p[n - 1] - p[n + 1]) / Interval(2.0 * (2 * n + 1));
}

}  // namespace

Interval phi_eval(int n, const Interval& x_in) {
  if (n < 1) throw DomainError("phi_eval needs n >= 1");
  const Interval x = clip_unit(x_in);
  const Interval t = Interval(2.0) * x - Interval(1.0);
  const auto p = legendre_enclosures(n + 1, t);
  Interval v = phi_from_legendre(p, n);
  // |phi_n| <= x(1 - x) <= 1/4.
  if (auto r = intersect(v, x * (Interval(1.0) - x) * kUnit)) v = *r;
  if (!x.is_point()) {
    // |phi_n'| <= 1.
    const double c = x.mid();
    const Interval pc = phi_eval(n, Interval(c));
    const Interval off = x - Interval(c);
    if (auto r = intersect(v, pc + kUnit * abs(off))) v = *r;
  }
  return v;
}

Interval dphi_eval(int n, const Interval& x_in) {
  if (n < 1) throw DomainError("dphi_eval needs n >= 1");
  const Interval x = clip_unit(x_in);
  const auto p = legendre_enclosures(n, Interval(2.0) * x - Interval(1.0));
  return -p[n];
}

AxisEnclosure axis_enclosure(int mu, const Interval& ref) {
  AxisEnclosure a;
  a.set = clip_unit(ref);
  const double c = a.set.mid();
  a.offset = a.set - Interval(c);
  const Interval tc = Interval(2.0) * Interval(c) - Interval(1.0);
  const Interval tx = Interval(2.0) * a.set - Interval(1.0);
  const auto pc = legendre_enclosures(mu + 1, tc);
  const auto px = legendre_enclosures(mu + 1, tx);
  const Interval bound = a.set * (Interval(1.0) - a.set) * kUnit;
  const Interval lip = kUnit * abs(a.offset);
  a.phi_center.resize(mu);
  a.phi.resize(mu);
  a.dphi.resize(mu);
  for (int n = 1; n <= mu; ++n) {
    a.phi_center[n - 1] = phi_from_legendre(pc, n);
    Interval v = phi_from_legendre(px, n);
    if (auto r = intersect(v, bound)) v = *r;
    if (auto r = intersect(v, a.phi_center[n - 1] + lip)) v = *r;
    a.phi[n - 1] = v;
    a.dphi[n - 1] = -px[n];
  }
  return a;
}

RowContraction contract_rows(const CoefficientField& f, const AxisEnclosure& ay) {
  const int mu = f.mu();
  RowContraction r;
  r.at_center.assign(mu, Interval(0.0));
  r.over_set.assign(mu, Interval(0.0));
  for (int i = 1; i <= mu; ++i) {
    Interval c(0.0), s(0.0);
    for (int j = 1; j <= mu; ++j) {
      const double u = f.coeff(i, j);
      if (u == 0.0) continue;
      c += Interval(u) * ay.phi_center[j - 1];
      s += Interval(u) * ay.phi[j - 1];
    }
    r.at_center[i - 1] = c;
    r.over_set[i - 1] = s;
  }
  return r;
}

ColumnContraction contract_columns(const CoefficientField& f, const AxisEnclosure& ax) {
  const int mu = f.mu();
  ColumnContraction r;
  r.over_set.assign(mu, Interval(0.0));
  for (int i = 1; i <= mu; ++i) {
    const Interval phi = ax.phi[i - 1];
    for (int j = 1; j <= mu; ++j) {
      const double u = f.coeff(i, j);
      if (u == 0.0) continue;
      r.over_set[j - 1] += Interval(u) * phi;
    }
  }
  return r;
}

Interval cell_range(const AxisEnclosure& ax, const ColumnContraction& cx, const AxisEnclosure& ay,
                    const RowContraction& ry) {
  const std::size_t mu = ax.phi.size();
  Interval center(0.0), gx(0.0), gy(0.0), naive(0.0);
  for (std::size_t i = 0; i < mu; ++i) {
    center += ax.phi_center[i] * ry.at_center[i];
    gx += ax.dphi[i] * ry.over_set[i];
    naive += ax.phi[i] * ry.over_set[i];
    gy += ay.dphi[i] * cx.over_set[i];
  }
  const Interval mv = center + gx * ax.offset + gy * ay.offset;
  auto r = intersect(mv, naive);
  if (!r) throw std::logic_error("disjoint range enclosures");
  return *r;
}

std::pair<Interval, Interval> to_reference(const CoefficientField& f, const Rectangle& cell) {
  const auto& d = f.domain();
  if (!(cell.ax < cell.bx && cell.ay < cell.by)) throw CellOutsideDomain("degenerate cell");
  if (!d.contains(cell)) throw CellOutsideDomain("cell is not inside the field's domain");
  const Interval lx = d.width(), ly = d.height();
  const Interval x((Interval(cell.ax) - Interval(d.ax)).lo(), (Interval(cell.bx) - Interval(d.ax)).hi());
  const Interval y((Interval(cell.ay) - Interval(d.ay)).lo(), (Interval(cell.by) - Interval(d.ay)).hi());
  return {clip_unit(x / lx), clip_unit(y / ly)};
}

namespace {

Interval range_ref(const CoefficientField& f, const Interval& x, const Interval& y,
                   const RangeRefinement& refine, int depth) {
  const auto ax = axis_enclosure(f.mu(), x);
  const auto ay = axis_enclosure(f.mu(), y);
  const Interval r = cell_range(ax, contract_columns(f, ax), ay, contract_rows(f, ay));
  const bool straddles = rounding::sub_down(r.lo(), refine.sigma) <= 0.0 &&
                         rounding::add_up(r.hi(), refine.sigma) >= 0.0;
  if (depth >= refine.depth || !straddles) return r;
  const double xm = x.mid(), ym = y.mid();
  const Interval xs[2] = {Interval(x.lo(), xm), Interval(xm, x.hi())};
  const Interval ys[2] = {Interval(y.lo(), ym), Interval(ym, y.hi())};
  std::optional<Interval> h;
  for (const auto& xi : xs) {
    for (const auto& yi : ys) {
      const Interval s = range_ref(f, xi, yi, refine, depth + 1);
      h = h ? hull(*h, s) : s;
    }
  }
  auto out = intersect(*h, r);
  return out ? *out : r;
}

}  // namespace

Interval uhat_range(const CoefficientField& f, const Rectangle& cell, RangeRefinement refine) {
  const auto [x, y] = to_reference(f, cell);
  return range_ref(f, x, y, refine, 0);
}

double lp_upper_from_sups(const std::vector<double>& sups, const std::vector<double>& areas,
                          double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("L^p bound needs finite p > 1");
  if (sups.size() != areas.size()) throw DomainError("sups/areas size mismatch");
  double total = 0.0;
  for (std::size_t k = 0; k < sups.size(); ++k) {
    if (sups[k] == 0.0 || areas[k] == 0.0) continue;
    const double term = rounding::mul_up(pow(Interval(sups[k]), p).hi(), areas[k]);
    total = rounding::add_up(total, term);
  }
  if (total == 0.0) return 0.0;
  return pow(Interval(total), Interval(1.0) / Interval(p)).hi();
}

double uhat_lp_upper(const CoefficientField& f, const std::vector<Rectangle>& cells, double p) {
  std::vector<double> sups, areas;
  sups.reserve(cells.size());
  areas.reserve(cells.size());
  for (const auto& c : cells) {
    sups.push_back(uhat_range(f, c).mag());
    areas.push_back(c.area().hi());
  }
  return lp_upper_from_sups(sups, areas, p);
}

// ---------------------------------------------------------------------------
// Floating point evaluation

BasisValues basis_values(int mu, double x) {
  const double t = 2.0 * x - 1.0;
  std::vector<double> p(mu + 2), dp(mu + 2);
  p[0] = 1.0;
  dp[0] = 0.0;
  p[1] = t;
  dp[1] = 1.0;
  for (int k = 1; k <= mu; ++k) {
    p[k + 1] = ((2.0 * k + 1) * t * p[k] - k * p[k - 1]) / (k + 1.0);
    dp[k + 1] = dp[k - 1] + (2.0 * k + 1) * p[k];
  }
  BasisValues b;
  b.phi.resize(mu);
  b.dphi.resize(mu);
  b.ddphi.resize(mu);
  for (int n = 1; n <= mu; ++n) {
    b.phi[n - 1] = (p[n - 1] - p[n + 1]) / (2.0 * (2 * n + 1));
    b.dphi[n - 1] = -p[n];
    b.ddphi[n - 1] = -2.0 * dp[n];
  }
  return b;
}

PointDerivatives point_derivatives(const CoefficientField& f, double x, double y) {
  const auto& d = f.domain();
  const double lx = d.bx - d.ax, ly = d.by - d.ay;
  const auto bx = basis_values(f.mu(), (x - d.ax) / lx);
  const auto by = basis_values(f.mu(), (y - d.ay) / ly);
  PointDerivatives r{0, 0, 0, 0, 0};
  for (int i = 1; i <= f.mu(); ++i) {
    double w = 0, wy = 0, wyy = 0;
    for (int j = 1; j <= f.mu(); ++j) {
      const double u = f.coeff(i, j);
      w += u * by.phi[j - 1];
      wy += u * by.dphi[j - 1];
      wyy += u * by.ddphi[j - 1];
    }
    r.u += bx.phi[i - 1] * w;
    r.ux += bx.dphi[i - 1] * w;
    r.uxx += bx.ddphi[i - 1] * w;
    r.uy += bx.phi[i - 1] * wy;
    r.uyy += bx.phi[i - 1] * wyy;
  }
  r.ux /= lx;
  r.uxx /= lx * lx;
  r.uy /= ly;
  r.uyy /= ly * ly;
  return r;
}

double point_eval(const CoefficientField& f, double x, double y) {
  return point_derivatives(f, x, y).u;
}

double residual(const CoefficientField& field, const std::function<double(double)>& f, double x,
                double y) {
  const auto d = point_derivatives(field, x, y);
  return d.uxx + d.uyy + f(d.u);
}

}  // namespace nodalcert
