#include "nodalcert/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "nodalcert/constants.hpp"
#include "nodalcert/errors.hpp"
#include "parallel.hpp"

namespace nodalcert {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Mat = Eigen::MatrixXd;
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

Nonlinearity Nonlinearity::allen_cahn(double epsilon) {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  Nonlinearity n;
  n.kind = FKind::AllenCahn;
  n.epsilon = epsilon;
  return n;
}

Nonlinearity Nonlinearity::emden(double lambda, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ConfigError("Emden exponent must be > 1");
  Nonlinearity n;
  n.kind = FKind::Emden;
  n.lambda = lambda;
  n.p = p;
  return n;
}

Nonlinearity Nonlinearity::polynomial(std::vector<double> coeffs) {
  Nonlinearity n;
  n.kind = FKind::Polynomial;
  n.poly = std::move(coeffs);
  return n;
}

double Nonlinearity::f(double t) const {
  switch (kind) {
    case FKind::AllenCahn: return (t - t * t * t) / (epsilon * epsilon);
    case FKind::Emden: return lambda * t + t * std::pow(std::abs(t), p - 1.0);
    case FKind::Polynomial: {
      double s = 0.0;
      for (auto it = poly.rbegin(); it != poly.rend(); ++it) s = s * t + *it;
      return s;
    }
  }
  return 0.0;
}

double Nonlinearity::df(double t) const {
  switch (kind) {
    case FKind::AllenCahn: return (1.0 - 3.0 * t * t) / (epsilon * epsilon);
    case FKind::Emden: return lambda + p * std::pow(std::abs(t), p - 1.0);
    case FKind::Polynomial: {
      double s = 0.0;
      for (std::size_t k = poly.size(); k-- > 1;) s = s * t + static_cast<double>(k) * poly[k];
      return s;
    }
  }
  return 0.0;
}

Interval Nonlinearity::neg_df(const Interval& x) const {
  switch (kind) {
    case FKind::AllenCahn: {
      const Interval e2 = sqr(Interval(epsilon));
      return (Interval(3.0) * sqr(x) - Interval(1.0)) / e2;
    }
    case FKind::Emden:
      return -(Interval(lambda) + Interval(p) * pow(abs(x), Interval(p - 1.0)));
    case FKind::Polynomial: {
      Interval s(0.0);
      for (std::size_t k = poly.size(); k-- > 1;) {
        s = s * x + Interval(static_cast<double>(k)) * Interval(poly[k]);
      }
      return -s;
    }
  }
  return Interval(0.0);
}

double Nonlinearity::cubic_coefficient() const {
  switch (kind) {
    case FKind::AllenCahn: return 1.0 / (epsilon * epsilon);
    case FKind::Emden:
      if (p == 3.0) return 1.0;
      break;
    case FKind::Polynomial: {
      const bool ok = poly.size() <= 4 && (poly.size() < 1 || poly[0] == 0.0) &&
                      (poly.size() < 3 || poly[2] == 0.0);
      if (ok) return poly.size() == 4 ? std::abs(poly[3]) : 0.0;
      break;
    }
  }
  throw DomainError("heuristic error radii need f linear plus cubic");
}

std::string Nonlinearity::describe() const {
  // Shortest text that reads back to the same double.
  auto num = [](double x) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
  };
  std::string s;
  switch (kind) {
    case FKind::AllenCahn: s = "allen_cahn(eps=" + num(epsilon) + ")"; break;
    case FKind::Emden: s = "emden(lambda=" + num(lambda) + ", p=" + num(p) + ")"; break;
    case FKind::Polynomial: {
      s = "polynomial(";
      for (std::size_t k = 0; k < poly.size(); ++k) s += (k ? ", " : "") + num(poly[k]);
      s += ")";
      break;
    }
  }
  return s;
}

const char* to_string(InitialGuess g) {
  switch (g) {
    case InitialGuess::PatternA: return "A";
    case InitialGuess::PatternB: return "B";
    case InitialGuess::PatternC: return "C";
    case InitialGuess::FromFile: return "file";
  }
  return "?";
}

void SolveConfig::validate() const {
  if (mu < 1) throw ConfigError("solve.mu must be >= 1");
  if (!(newton_tol > 0.0)) throw ConfigError("solve.tol must be > 0");
  if (max_iters < 1) throw ConfigError("solve.max_iters must be >= 1");
  if (quadrature_order != 0 && quadrature_order < 2 * mu + 4) {
    throw ConfigError("solve.quadrature_order must be at least 2 mu + 4");
  }
  if (initial_guess == InitialGuess::FromFile && guess_path.empty()) {
    throw ConfigError("solve.initial_guess = file needs solve.guess_path");
  }
}

int SolveConfig::quadrature_points() const { return quadrature_order > 0 ? quadrature_order : 2 * mu + 8; }

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int k = 0; k < (n + 1) / 2; ++k) {
    double x = std::cos(kPi * (k + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = x;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1, 1] to [0, 1].
    nodes[k] = 0.5 * (1.0 - x);
    nodes[n - 1 - k] = 0.5 * (1.0 + x);
    weights[k] = weights[n - 1 - k] = 0.5 * w;
  }
}

namespace {

// Basis tables at the quadrature nodes: phi(q, i), dphi(q, i), ddphi(q, i).
struct Tables {
  std::vector<double> x, w;
  Mat phi, dphi, ddphi;
};

Tables make_tables(int mu, int nq) {
  Tables t;
  gauss_legendre(nq, t.x, t.w);
  t.phi.resize(nq, mu);
  t.dphi.resize(nq, mu);
  t.ddphi.resize(nq, mu);
  for (int q = 0; q < nq; ++q) {
    const auto b = basis_values(mu, t.x[q]);
    for (int i = 0; i < mu; ++i) {
      t.phi(q, i) = b.phi[i];
      t.dphi(q, i) = b.dphi[i];
      t.ddphi(q, i) = b.ddphi[i];
    }
  }
  return t;
}

Mat coeff_matrix(const CoefficientField& f) {
  const int mu = f.mu();
  return Eigen::Map<const RowMat>(f.coeffs().data(), mu, mu);
}

CoefficientField to_field(const Mat& c, const Rectangle& d) {
  const int mu = static_cast<int>(c.rows());
  std::vector<double> v(static_cast<std::size_t>(mu) * mu);
  Eigen::Map<RowMat>(v.data(), mu, mu) = c;
  return CoefficientField(mu, std::move(v), d);
}

// Galerkin system on a rectangle of size wx x wy, reference coordinates.
class Galerkin {
 public:
  Galerkin(int mu, int nq, const Rectangle& d, const Nonlinearity& f, int threads)
      : mu_(mu), t_(make_tables(mu, nq)), f_(f), threads_(threads) {
    wx_ = d.bx - d.ax;
    wy_ = d.by - d.ay;
    const Eigen::Map<const Eigen::VectorXd> w(t_.w.data(), nq);
    a_ = t_.dphi.transpose() * w.asDiagonal() * t_.dphi;
    b_ = t_.phi.transpose() * w.asDiagonal() * t_.phi;
    wvec_ = w;
  }

  Mat values(const Mat& c) const { return t_.phi * c * t_.phi.transpose(); }

  Mat residual(const Mat& c) const {
    const Mat u = values(c);
    Mat fu = u.unaryExpr([&](double v) { return f_.f(v); });
    fu = wvec_.asDiagonal() * fu * wvec_.asDiagonal();
    return (wy_ / wx_) * a_ * c * b_ + (wx_ / wy_) * b_ * c * a_ -
           (wx_ * wy_) * (t_.phi.transpose() * fu * t_.phi);
  }

  Mat jacobian(const Mat& c) const {
    const int mu = mu_, nq = static_cast<int>(t_.x.size());
    const Mat u = values(c);
    // T[qx](l, j) = sum_qy w_qy f'(u(qx, qy)) phi(qy, l) phi(qy, j).
    std::vector<Mat> tq(nq);
    detail::parallel_for(nq, threads_, [&](std::size_t b, std::size_t e) {
      for (std::size_t qx = b; qx < e; ++qx) {
        Eigen::VectorXd d(nq);
        for (int qy = 0; qy < nq; ++qy) d(qy) = wvec_(qy) * f_.df(u(qx, qy));
        tq[qx] = t_.phi.transpose() * d.asDiagonal() * t_.phi;
      }
    });
    const int n = mu * mu;
    Mat j(n, n);
    const double sa = wy_ / wx_, sb = wx_ / wy_, sn = wx_ * wy_;
    detail::parallel_for(mu, threads_, [&](std::size_t b, std::size_t e) {
      Mat blk(mu, mu);
      for (std::size_t k = b; k < e; ++k) {
        for (int i = 0; i < mu; ++i) {
          blk.setZero();
          for (int qx = 0; qx < nq; ++qx) {
            const double s = wvec_(qx) * t_.phi(qx, k) * t_.phi(qx, i);
            if (s != 0.0) blk.noalias() += s * tq[qx];
          }
          // Row (k, l), column (i, j).
          for (int l = 0; l < mu; ++l) {
            for (int jj = 0; jj < mu; ++jj) {
              j(static_cast<int>(k) * mu + l, i * mu + jj) =
                  sa * a_(k, i) * b_(l, jj) + sb * b_(k, i) * a_(l, jj) - sn * blk(l, jj);
            }
          }
        }
      }
    });
    return j;
  }

 private:
  int mu_;
  Tables t_;
  const Nonlinearity& f_;
  int threads_;
  double wx_ = 1.0, wy_ = 1.0;
  Mat a_, b_;
  Eigen::VectorXd wvec_;
};

Eigen::VectorXd flatten(const Mat& m) {
  const RowMat r = m;
  return Eigen::Map<const Eigen::VectorXd>(r.data(), r.size());
}

Mat unflatten(const Eigen::VectorXd& v, int mu) {
  return Eigen::Map<const RowMat>(v.data(), mu, mu);
}

double seed_value(InitialGuess g, double x, double y, double width) {
  auto edge = [&](double s) { return std::tanh(s / width) * std::tanh((1.0 - s) / width); };
  const double env = edge(x) * edge(y);
  switch (g) {
    case InitialGuess::PatternA: return env * std::tanh((x - 0.5) / width);
    case InitialGuess::PatternB: return env * std::tanh((x - 0.5) / width) * std::tanh((y - 0.5) / width);
    case InitialGuess::PatternC: {
      const double r = std::hypot(x - 0.5, y - 0.5);
      return env * std::tanh((0.3 - r) / width);
    }
    case InitialGuess::FromFile: break;
  }
  return 0.0;
}

}  // namespace

CoefficientField initial_pattern(InitialGuess g, int mu, double width, Rectangle domain) {
  if (g == InitialGuess::FromFile) throw ConfigError("file guesses are loaded, not generated");
  if (!(width > 0.0)) throw ConfigError("pattern width must be > 0");
  // L^2 projection in reference coordinates: B C B = G.
  const Tables t = make_tables(mu, 2 * mu + 40);
  const int nq = static_cast<int>(t.x.size());
  Mat g_w(nq, nq);
  for (int a = 0; a < nq; ++a) {
    for (int b = 0; b < nq; ++b) g_w(a, b) = t.w[a] * t.w[b] * seed_value(g, t.x[a], t.x[b], width);
  }
  const Eigen::Map<const Eigen::VectorXd> w(t.w.data(), nq);
  const Mat bm = t.phi.transpose() * w.asDiagonal() * t.phi;
  const Mat gm = t.phi.transpose() * g_w * t.phi;
  const Eigen::LLT<Mat> llt(bm);
  const Mat c = llt.solve(llt.solve(gm).transpose()).transpose();
  return to_field(c, domain);
}

SolveResult newton_galerkin_run(const SolveConfig& cfg) {
  cfg.validate();
  const int mu = cfg.mu;
  const int threads = detail::resolve_threads(cfg.threads);
  const Galerkin g(mu, cfg.quadrature_points(), cfg.domain, cfg.f, threads);

  Mat c;
  if (cfg.initial_guess == InitialGuess::FromFile) {
    const auto guess = load_coefficients(cfg.guess_path);
    c = Mat::Zero(mu, mu);
    const int k = std::min(mu, guess.mu());
    c.topLeftCorner(k, k) = coeff_matrix(guess).topLeftCorner(k, k);
  } else {
    const double width = cfg.f.kind == FKind::AllenCahn ? std::sqrt(2.0) * cfg.f.epsilon : 0.1;
    c = coeff_matrix(initial_pattern(cfg.initial_guess, mu, width, cfg.domain));
  }

  SolveResult out;
  Mat r = g.residual(c);
  double norm = r.norm();
  out.history.push_back(norm);
  for (int it = 0; it < cfg.max_iters && !(norm < cfg.newton_tol); ++it) {
    const Mat j = g.jacobian(c);
    const Eigen::PartialPivLU<Mat> lu(j);
    if (!(lu.rcond() > 1e-14)) throw SingularJacobian("Newton Jacobian is numerically singular");
    const Eigen::VectorXd step = lu.solve(-flatten(r));
    if (!step.allFinite()) throw SingularJacobian("Newton step is not finite");
    const Mat dc = unflatten(step, mu);

    // Damping: halve until the residual decreases.
    double t = 1.0;
    bool accepted = false;
    for (int h = 0; h <= 30; ++h, t *= 0.5) {
      const Mat trial = c + t * dc;
      const Mat rt = g.residual(trial);
      const double nt = rt.norm();
      if (nt < norm) {
        c = trial;
        r = rt;
        norm = nt;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw NoConvergence("no residual decrease along the Newton direction at iteration " +
                          std::to_string(it + 1) + ", residual " + std::to_string(norm));
    }
    out.history.push_back(norm);
    out.iterations = it + 1;
  }
  if (!(norm < cfg.newton_tol)) {
    throw NoConvergence("residual " + std::to_string(norm) + " after " +
                        std::to_string(cfg.max_iters) + " iterations");
  }
  out.residual = norm;
  out.field = to_field(c, cfg.domain);
  return out;
}

CoefficientField newton_galerkin(const SolveConfig& cfg) { return newton_galerkin_run(cfg).field; }

double defect_estimate(const CoefficientField& field, const Nonlinearity& f, double tau,
                       int quadrature_points) {
  if (!(tau >= 0.0)) throw DomainError("tau must be >= 0");
  const int mu = field.mu();
  const int nq = std::max(quadrature_points > 0 ? quadrature_points : 0, 3 * mu + 8);
  const Tables t = make_tables(mu, nq);
  const Rectangle& d = field.domain();
  const double wx = d.bx - d.ax, wy = d.by - d.ay;
  const Mat c = coeff_matrix(field);
  const Mat u = t.phi * c * t.phi.transpose();
  const Mat lap = (t.ddphi * c * t.phi.transpose()) / (wx * wx) +
                  (t.phi * c * t.ddphi.transpose()) / (wy * wy);
  double s = 0.0;
  for (int a = 0; a < nq; ++a) {
    for (int b = 0; b < nq; ++b) {
      const double r = lap(a, b) + f.f(u(a, b));
      s += t.w[a] * t.w[b] * r * r;
    }
  }
  const double l2 = std::sqrt(s * wx * wy);
  const double lambda1 = kPi * kPi * (1.0 / (wx * wx) + 1.0 / (wy * wy));
  return l2 / std::sqrt(lambda1 + tau);
}

double radius_function(double rho, double delta, double k_bound, double g_lin, double g_quad) {
  return delta - rho / k_bound + rho * rho * (g_lin / 2.0 + g_quad * rho / 3.0);
}

double smallest_radius(double delta, double k_bound, double g_lin, double g_quad) {
  if (!(delta >= 0.0) || !(k_bound > 0.0) || !(g_lin >= 0.0) || !(g_quad >= 0.0)) {
    throw DomainError("radius search needs delta >= 0, K > 0 and g >= 0");
  }
  if (delta == 0.0) return 0.0;
  if (g_lin == 0.0 && g_quad == 0.0) return k_bound * delta;
  // rho / K - G(rho) peaks where g(rho) = 1 / K.
  const double inv_k = 1.0 / k_bound;
  const double peak = g_quad == 0.0 ? inv_k / g_lin
                                    : (-g_lin + std::sqrt(g_lin * g_lin + 4.0 * g_quad * inv_k)) /
                                          (2.0 * g_quad);
  auto h = [&](double r) { return radius_function(r, delta, k_bound, g_lin, g_quad); };
  if (!(h(peak) <= 0.0)) throw NoRadius("delta is too large for any radius");
  double lo = 0.0, hi = peak;
  for (int i = 0; i < 2000; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (h(mid) <= 0.0 ? hi : lo) = mid;
  }
  return hi;
}

HeuristicErrors heuristic_error(const HeuristicErrorInput& in, const Nonlinearity& f,
                                const CoefficientField& field) {
  if (!(in.delta >= 0.0)) throw DomainError("delta must be >= 0");
  if (!(in.k_bound > 0.0)) throw DomainError("K must be > 0");
  if (!(in.tau >= 0.0)) throw DomainError("tau must be >= 0");
  const Rectangle& d = field.domain();

  // tau > -f'(u_hat) everywhere, checked on enclosures over a cell grid.
  {
    const int level = std::clamp(in.tau_check_level, 0, 20);
    const int ex = (level + 1) / 2, ey = level / 2;
    const int nx = 1 << ex, ny = 1 << ey;
    double worst = -std::numeric_limits<double>::infinity();
    const double wx = d.bx - d.ax, wy = d.by - d.ay;
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix) {
        const Rectangle cell{d.ax + wx * ix / nx, d.ax + wx * (ix + 1) / nx, d.ay + wy * iy / ny,
                             d.ay + wy * (iy + 1) / ny};
        worst = std::max(worst, f.neg_df(uhat_range(field, cell)).hi());
      }
    }
    if (!(in.tau > worst)) {
      throw TauViolation("tau = " + std::to_string(in.tau) + " does not exceed -f'(u_hat), which reaches " +
                         std::to_string(worst));
    }
  }

  HeuristicErrors out;
  const double kappa = f.cubic_coefficient();
  const double wx = d.bx - d.ax, wy = d.by - d.ay;
  const double lambda1 = lambda1_rectangle(wx, wy);
  out.c4 = in.c4 > 0.0 ? in.c4
                       : std::min(embed_dirichlet_upper(4.0, 2, d.area().hi()),
                                  embed_plum_upper(4.0, 2, lambda1, in.tau));

  // ||u_hat||_{L^4} by quadrature.
  {
    const int mu = field.mu();
    const Tables t = make_tables(mu, 2 * mu + 8);
    const Mat c = coeff_matrix(field);
    const Mat u = t.phi * c * t.phi.transpose();
    double s = 0.0;
    for (int a = 0; a < u.rows(); ++a) {
      for (int b = 0; b < u.cols(); ++b) s += t.w[a] * t.w[b] * std::pow(u(a, b), 4);
    }
    out.uhat_l4 = std::pow(s * wx * wy, 0.25);
  }

  const double g_lin = 6.0 * kappa * std::pow(out.c4, 3) * out.uhat_l4;
  const double g_quad = 6.0 * kappa * std::pow(out.c4, 4);
  out.rho = smallest_radius(in.delta, in.k_bound, g_lin, g_quad);
  out.sigma = in.c_embed > 0.0 ? in.c_embed * out.rho : 0.0;
  return out;
}

}  // namespace nodalcert
