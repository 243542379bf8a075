#include "nodalcert/constants.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

#include "nodalcert/errors.hpp"

namespace nodalcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive_finite(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be finite and > 0");
}

void require_nonnegative_finite(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be finite and >= 0");
  }
}

Interval two_pi() { return Interval(2.0) * Interval::pi(); }

}  // namespace

const char* to_string(EigenMethod m) {
  switch (m) {
    case EigenMethod::LiYau: return "LiYau";
    case EigenMethod::RectangleExact: return "RectangleExact";
    case EigenMethod::UserSupplied: return "UserSupplied";
  }
  return "?";
}

const char* to_string(EmbedMethod m) {
  switch (m) {
    case EmbedMethod::TalentiA2: return "TalentiA2";
    case EmbedMethod::PlumA5: return "PlumA5";
    case EmbedMethod::MizuguchiCp: return "MizuguchiCp";
    case EmbedMethod::UserSupplied: return "UserSupplied";
  }
  return "?";
}

Interval unit_ball_volume(int n_dim) {
  if (n_dim < 1) throw DomainError("dimension must be >= 1");
  const Interval half_n = Interval(n_dim) / Interval(2.0);
  return pow(Interval::pi(), half_n) / gamma(half_n + Interval(1.0));
}

double liyau_lower(int k, int n_dim, double volume_upper) {
  if (k < 1) throw DomainError("eigenvalue index must be >= 1");
  require_positive_finite(volume_upper, "volume");
  const Interval n(n_dim);
  const Interval lead = Interval(4.0) * sqr(Interval::pi()) * n / (n + Interval(2.0));
  const Interval base = Interval(k) / (unit_ball_volume(n_dim) * Interval(volume_upper));
  return (lead * pow(base, Interval(2.0) / n)).lo();
}

double lambda1_lower_corollary(int n_dim, double volume_upper) {
  require_positive_finite(volume_upper, "volume");
  const Interval v(volume_upper);
  if (n_dim == 2) return (two_pi() / v).lo();
  if (n_dim == 3) {
    const Interval two_thirds = Interval(2.0) / Interval(3.0);
    const Interval c = Interval(3.0) * pow(Interval(6.0), two_thirds) / Interval(5.0) *
                       pow(Interval::pi(), Interval(4.0) / Interval(3.0));
    return (c / pow(v, two_thirds)).lo();
  }
  throw DomainError("the simplified eigenvalue bound is stated for N = 2 and N = 3 only");
}

double lambda1_rectangle(double w, double h) {
  require_positive_finite(w, "width");
  require_positive_finite(h, "height");
  const Interval one(1.0);
  return (sqr(Interval::pi()) * (one / sqr(Interval(w)) + one / sqr(Interval(h)))).lo();
}

namespace {

Interval talenti_interval(double p, int n_dim) {
  if (n_dim < 2) throw DomainError("Talenti constant needs N >= 2");
  require_positive_finite(p, "p");
  const Interval n(n_dim), one(1.0);
  const Interval q = n * Interval(p) / (n + Interval(p));
  if (!(q.lo() > 1.0) || !(q.hi() < n_dim)) {
    throw DomainError("Talenti constant needs 1 < q = Np/(N+p) < N");
  }
  const Interval inv_q = one / q;
  const Interval nq = n / q;
  const Interval ratio = gamma(one + n / Interval(2.0)) * gamma(n) /
                         (gamma(nq) * gamma(one + n - nq));
  return one / sqrt(Interval::pi()) * pow(n, -inv_q) *
         pow((q - one) / (n - q), one - inv_q) * pow(ratio, one / n);
}

}  // namespace

double talenti_constant(double p, int n_dim) { return talenti_interval(p, n_dim).hi(); }

double embed_dirichlet_upper(double p, int n_dim, double volume_upper) {
  require_positive_finite(volume_upper, "volume");
  if (n_dim == 2) {
    if (!(p > 2.0) || !std::isfinite(p)) throw DomainError("N = 2 needs p in (2, inf)");
  } else if (n_dim >= 3) {
    const Interval lo = Interval(n_dim) / Interval(n_dim - 1.0);
    const Interval hi = Interval(2.0 * n_dim) / Interval(n_dim - 2.0);
    if (!(p > lo.hi()) || !(p <= hi.lo())) {
      throw DomainError("p outside (N/(N-1), 2N/(N-2)]");
    }
  } else {
    throw DomainError("embedding bound needs N >= 2");
  }
  const Interval n(n_dim);
  const Interval q = n * Interval(p) / (n + Interval(p));
  const Interval expo = (Interval(2.0) - q) / (Interval(2.0) * q);
  return (pow(Interval(volume_upper), expo) * talenti_interval(p, n_dim)).hi();
}

double embed_plum_upper(double p, int n_dim, double lambda1_lower, double tau) {
  require_nonnegative_finite(lambda1_lower, "lambda1");
  require_nonnegative_finite(tau, "tau");
  if (lambda1_lower == 0.0 && tau == 0.0) throw DomainError("lambda1 and tau cannot both be 0");
  const Interval one(1.0), two(2.0), P(p), lam(lambda1_lower), t(tau);
  if (n_dim == 2) {
    if (!(p >= 2.0) || !std::isfinite(p)) throw DomainError("N = 2 needs p in [2, inf)");
    const int nu = static_cast<int>(std::floor(p / 2.0));
    Interval prod(1.0);
    for (int k = 0; k <= nu - 2; ++k) prod *= P / two - Interval(k);
    const Interval e1 = one / two + Interval(2.0 * nu - 3.0) / P;
    const Interval v = pow(one / two, e1) * pow(prod, two / P) * pow(lam + P / two * t, -(one / P));
    return v.hi();
  }
  if (n_dim >= 3) {
    const Interval n(n_dim);
    const Interval pmax = two * n / (n - two);
    if (!(p >= 2.0) || !(p <= pmax.lo())) throw DomainError("p outside [2, 2N/(N-2)]");
    Interval s = n * (one / P - one / two + one / n);
    s = intersect(s, Interval(0.0, 1.0)).value_or(Interval(0.0, 1.0));
    const Interval first = pow((n - one) / (sqrt(n) * (n - two)), one - s);
    double second = 1.0;
    if (s.lo() > 0.0) {
      second = pow(s / (s * lam + t), s / two).hi();
    } else if (s.hi() > 0.0) {
      // s straddles 0 (critical exponent): b^{s/2} <= max(1, b_hi^{s_hi/2})
      // with b = s/(s lambda + tau) <= 1/lambda, or s_hi/tau when lambda = 0.
      const double b_hi = lambda1_lower > 0.0 ? (one / lam).hi() : (Interval(s.hi()) / t).hi();
      if (b_hi > 1.0) second = pow(Interval(b_hi), s.hi() / 2.0).hi();
    }
    return (first * Interval(second)).hi();
  }
  throw DomainError("embedding bound needs N >= 2");
}

double cm_tau(double c_m, double tau) {
  require_nonnegative_finite(c_m, "C(M)");
  require_nonnegative_finite(tau, "tau");
  const Interval c(c_m);
  return (c * sqrt(Interval(1.0) + Interval(tau) * sqr(c))).hi();
}

// ---------------------------------------------------------------------------
// Mizuguchi constants

Interval mizuguchi_a(const Interval& m) {
  if (m.is_point() && m.lo() == 1.0) return Interval(1.0);
  if (!(m.lo() > 1.0)) throw DomainError("A_m needs m = 1 or a value bounded away from 1");
  const Interval one(1.0), two(2.0);
  return sqrt(pow(m, two / m - one) * pow(m - one, one - one / m));
}

namespace {

// Enclosure of int_0^beta sec(t)^s dt for beta in the given interval
// (0 < beta < pi/2) and s > 0. The integrand is convex and increasing, so
// the midpoint rule is a lower and the trapezoid rule an upper bound.
Interval sec_power_integral(const Interval& beta, const Interval& s) {
  auto f = [&](const Interval& t) { return pow(Interval(1.0) / cos(t), s); };
  const Interval half_pi = Interval::pi() / Interval(2.0);
  if (!(beta.lo() > 0.0) || !(beta.hi() < half_pi.lo())) {
    throw DomainError("angle outside (0, pi/2)");
  }
  int j = std::max(4, static_cast<int>(std::ceil(std::log2(64.0 / beta.lo()))));
  constexpr long kMaxNodes = 1L << 22;
  Interval best = Interval::entire();
  for (;; ++j) {
    const double h = std::ldexp(1.0, -j);
    const long k_end = static_cast<long>(std::floor(beta.lo() / h));
    if (k_end > kMaxNodes) break;
    Interval lower(0.0), upper(0.0);
    Interval f_prev = f(Interval(0.0));
    for (long k = 0; k < k_end; ++k) {
      const double mid = std::ldexp(2.0 * k + 1.0, -j - 1);
      const double b = std::ldexp(static_cast<double>(k + 1), -j);
      const Interval f_next = f(Interval(b));
      lower += Interval(h) * f(Interval(mid));
      upper += Interval(h) * (f_prev + f_next) / Interval(2.0);
      f_prev = f_next;
    }
    // Partial last piece [k_end h, beta]; f increasing.
    const double tail_start = std::ldexp(static_cast<double>(k_end), -j);
    const Interval tail_lo = Interval(beta.lo()) - Interval(tail_start);
    const Interval tail_hi = Interval(beta.hi()) - Interval(tail_start);
    lower += Interval(std::max(0.0, tail_lo.lo())) * f_prev;
    upper += Interval(0.0, tail_hi.hi()) * f(Interval(beta.hi()));
    best = Interval(std::max(0.0, lower.lo()), upper.hi());
    if (best.width() <= 1e-6 * best.lo()) return best;
  }
  if (best.width() <= 1e-3 * best.lo()) return best;
  throw QuadratureBudgetExceeded("singular integral did not converge to relative width 1e-3");
}

void check_mizuguchi_exponents(double p, double q) {
  if (!(q >= 1.0) || !(p >= q)) throw DomainError("D_p needs 1 <= q <= p");
  if (q < 2.0) {
    const Interval pmax = Interval(2.0) * Interval(q) / (Interval(2.0) - Interval(q));
    if (!(p < pmax.lo())) throw DomainError("D_p needs p < 2q/(2-q) for q < 2");
  } else if (q == 2.0) {
    if (!std::isfinite(p)) throw DomainError("D_p needs p < inf for q = 2");
  } else {
    throw DomainError("D_p is available for q <= N = 2 only");
  }
}

Interval dp_from_dims(const Interval& w, const Interval& h, double p, double q) {
  check_mizuguchi_exponents(p, q);
  const Interval one(1.0), two(2.0), P(p), Q(q);
  Interval r = Q * P / ((Q - one) * P + Q);
  if (r.lo() < 1.0) r = Interval(1.0, std::max(1.0, r.hi()));  // r >= 1 since p >= q
  const Interval s = two - r;
  if (!(s.lo() > 0.0)) throw DomainError("|x|^{-r} is not integrable for r >= 2");
  // p = 1 forces q = 1 and p' = inf, where A_{p'} = 1.
  const Interval a_conj = p == 1.0 ? one : mizuguchi_a(P / (P - one));
  const Interval a = mizuguchi_a(r) * mizuguchi_a(Q) * a_conj;

  // int over [0,w]x[0,h] of |x|^{-r} in polar coordinates: rays leave
  // through x = w for angles below atan(h/w) and through y = h above it.
  const Interval i1 = pow(w, s) * sec_power_integral(atan(h / w), s);
  const Interval i2 = pow(h, s) * sec_power_integral(atan(w / h), s);
  const Interval quarter = (i1 + i2) / s;
  const Interval norm = pow(Interval(4.0) * quarter, one / r);

  const Interval d2 = sqr(w) + sqr(h);
  return d2 / (two * w * h) * sqr(a) * norm;
}

}  // namespace

Interval mizuguchi_dp_enclosure(const Rectangle& rect, double p, double q) {
  Rectangle::make(rect.ax, rect.bx, rect.ay, rect.by);
  return dp_from_dims(rect.width(), rect.height(), p, q);
}

double mizuguchi_dp(const Rectangle& rect, double p, double q) {
  return mizuguchi_dp_enclosure(rect, p, q).hi();
}

void check_partition(const std::vector<Rectangle>& partition) {
  if (partition.empty()) throw PartitionInvalid("empty partition");
  std::vector<Rectangle> r = partition;
  for (const auto& x : r) {
    if (!(x.ax < x.bx && x.ay < x.by) || !std::isfinite(x.ax) || !std::isfinite(x.bx) ||
        !std::isfinite(x.ay) || !std::isfinite(x.by)) {
      throw PartitionInvalid("degenerate rectangle in partition");
    }
  }
  std::sort(r.begin(), r.end(), [](const Rectangle& a, const Rectangle& b) { return a.ax < b.ax; });
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = i + 1; j < r.size() && r[j].ax < r[i].bx; ++j) {
      if (r[i].ay < r[j].by && r[j].ay < r[i].by) {
        throw PartitionInvalid("partition rectangles overlap");
      }
    }
  }
}

double mizuguchi_cp(const std::vector<Rectangle>& partition, double p, double q,
                    const std::vector<double>& d_upper) {
  check_partition(partition);
  if (d_upper.size() != partition.size()) throw DomainError("one D_p bound per rectangle needed");
  if (!(q >= 1.0) || !(p >= q)) throw DomainError("C_p' needs 1 <= q <= p <= inf");
  double dmax = 0.0;
  for (double d : d_upper) {
    require_nonnegative_finite(d, "D_p");
    dmax = std::max(dmax, d);
  }
  if (p == kInf && q == kInf) return std::max(1.0, dmax);
  const Interval one(1.0);
  const Interval inv_p = p == kInf ? Interval(0.0) : one / Interval(p);
  const Interval inv_q = q == kInf ? Interval(0.0) : one / Interval(q);
  const Interval e = inv_p - inv_q;
  double vol_term = 0.0;
  for (const auto& r : partition) {
    const double t = (e.is_point() && e.lo() == 0.0) ? 1.0 : pow(r.area(), e).hi();
    vol_term = std::max(vol_term, t);
  }
  return (pow(Interval(2.0), one - inv_q) * Interval(std::max(vol_term, dmax))).hi();
}

double mizuguchi_cp(const std::vector<Rectangle>& partition, double p, double q) {
  check_partition(partition);
  if (p == kInf && q == kInf) {
    throw DomainError("D_inf is not available from the rectangle formula; supply it explicitly");
  }
  // Congruent rectangles share one D_p; key on the exact width/height
  // enclosures so equal keys mean bit-identical computations.
  std::map<std::array<double, 4>, double> cache;
  std::vector<double> d;
  d.reserve(partition.size());
  for (const auto& r : partition) {
    const Interval w = r.width(), h = r.height();
    const std::array<double, 4> key{w.lo(), w.hi(), h.lo(), h.hi()};
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, dp_from_dims(w, h, p, q).hi()).first;
    d.push_back(it->second);
  }
  return mizuguchi_cp(partition, p, q, d);
}

}  // namespace nodalcert
