#pragma once

// Non-rigorous spectral Newton-Galerkin solver for -Laplace u = f(u) with
// zero Dirichlet data on a rectangle, and heuristic error radii. Nothing in
// this header is certified.

#include <string>
#include <vector>

#include "nodalcert/basis.hpp"

namespace nodalcert {

enum class FKind { AllenCahn, Emden, Polynomial };

struct Nonlinearity {
  FKind kind = FKind::AllenCahn;
  double epsilon = 0.1;         // AllenCahn: f(t) = eps^-2 (t - t^3)
  double lambda = 0.0, p = 3.0;  // Emden: f(t) = lambda t + t |t|^{p-1}
  std::vector<double> poly;     // Polynomial: f(t) = sum poly[k] t^k

  static Nonlinearity allen_cahn(double epsilon);
  static Nonlinearity emden(double lambda, double p);
  static Nonlinearity polynomial(std::vector<double> coeffs);

  [[nodiscard]] double f(double t) const;
  [[nodiscard]] double df(double t) const;
  // Enclosure of -f'(t) over t in x; used for the tau condition.
  [[nodiscard]] Interval neg_df(const Interval& x) const;
  // kappa with f'(s) - f'(t) = 3 kappa (s^2 - t^2) up to a linear part, for
  // nonlinearities that are linear plus a cubic; throws DomainError
  // otherwise.
  [[nodiscard]] double cubic_coefficient() const;
  [[nodiscard]] std::string describe() const;
};

enum class InitialGuess { PatternA, PatternB, PatternC, FromFile };
const char* to_string(InitialGuess g);

struct SolveConfig {
  int mu = 20;
  Nonlinearity f;
  InitialGuess initial_guess = InitialGuess::PatternC;
  std::string guess_path;  // FromFile
  double newton_tol = 1e-10;
  int max_iters = 50;
  // Gauss-Legendre points per axis; 0 means 2 mu + 8.
  int quadrature_order = 0;
  Rectangle domain = Rectangle::unit();
  int threads = 0;

  // Throws ConfigError.
  void validate() const;
  [[nodiscard]] int quadrature_points() const;
};

struct SolveResult {
  CoefficientField field = CoefficientField::zero(1);
  int iterations = 0;
  double residual = 0.0;
  // Residual norm before the first step and after each accepted step.
  std::vector<double> history;
};

// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Coefficients of the initial pattern at degree mu. The patterns are sign
// layouts of amplitude about 1: A splits the square along x = 1/2, B is a
// quadrant checkerboard, C a central bump inside an opposite-sign ring.
// width sets the transition scale (the Allen-Cahn interface width).
CoefficientField initial_pattern(InitialGuess g, int mu, double width,
                                 Rectangle domain = Rectangle::unit());

// Throws NoConvergence, SingularJacobian, ConfigError.
SolveResult newton_galerkin_run(const SolveConfig& cfg);
CoefficientField newton_galerkin(const SolveConfig& cfg);

// C_2 || Laplace u_hat + f(u_hat) ||_{L^2} with C_2 = (lambda_1(Omega) + tau)^{-1/2}
// by Gauss quadrature. Heuristic.
double defect_estimate(const CoefficientField& field, const Nonlinearity& f, double tau = 0.0,
                       int quadrature_points = 0);

struct HeuristicErrorInput {
  double delta = 0.0;
  double k_bound = 0.0;  // inverse-operator norm bound, user supplied
  double tau = 0.0;
  // Embedding constant C_4 for the tau-norm; 0 means compute it.
  double c4 = 0.0;
  // sigma = c_embed * rho when positive.
  double c_embed = 0.0;
  // Grid level for the tau check (2^level cells).
  int tau_check_level = 12;
};

struct HeuristicErrors {
  double rho = 0.0;
  double sigma = 0.0;
  double c4 = 0.0;
  double uhat_l4 = 0.0;
  bool certified = false;  // always false
};

// Smallest rho > 0 with delta <= rho / K - G(rho), G(t) = int_0^t g, where
// g(t) = 6 kappa C_4^3 t (||u_hat||_{L^4} + C_4 t) bounds the Lipschitz
// growth of the linearization. Throws TauViolation when tau <= -f'(u_hat)
// somewhere, NoRadius when no such rho exists.
HeuristicErrors heuristic_error(const HeuristicErrorInput& in, const Nonlinearity& f,
                                const CoefficientField& field);

// delta - rho / K + G(rho) for g(t) = g_lin t + g_quad t^2.
double radius_function(double rho, double delta, double k_bound, double g_lin, double g_quad);
// First zero of radius_function on (0, inf), by bisection. Throws NoRadius.
double smallest_radius(double delta, double k_bound, double g_lin, double g_quad);

}  // namespace nodalcert
