#pragma once

// Rigorous eigenvalue lower bounds and embedding-constant upper bounds.
// Every upper bound is rounded up and every lower bound rounded down.

#include <string>
#include <vector>

#include "nodalcert/basis.hpp"
#include "nodalcert/interval.hpp"

namespace nodalcert {

enum class EigenMethod { LiYau, RectangleExact, UserSupplied };
enum class EmbedMethod { TalentiA2, PlumA5, MizuguchiCp, UserSupplied };

const char* to_string(EigenMethod m);
const char* to_string(EmbedMethod m);

struct EigenLower {
  double value = 0.0;
  EigenMethod method = EigenMethod::LiYau;
  double domain_volume = 0.0;
  std::string provenance;  // required for UserSupplied
};

struct EmbedUpper {
  double p = 0.0;
  double value = 0.0;
  EmbedMethod method = EmbedMethod::TalentiA2;
};

// Volume of the unit N-ball, pi^{N/2} / Gamma(N/2 + 1).
Interval unit_ball_volume(int n_dim);

// Lower bound for the k-th Dirichlet eigenvalue of -Laplace on any domain
// of volume at most volume_upper:
//   (4 pi^2 N / (N + 2)) (k / (B_N |Omega|))^{2/N}.
double liyau_lower(int k, int n_dim, double volume_upper);

// The same bound for k = 1 in its simplified forms: 2 pi / |Omega| for N = 2
// and (3 6^{2/3} / 5) pi^{4/3} |Omega|^{-2/3} for N = 3.
double lambda1_lower_corollary(int n_dim, double volume_upper);

// First Dirichlet eigenvalue of a w x h rectangle, pi^2 (1/w^2 + 1/h^2),
// rounded down.
double lambda1_rectangle(double w, double h);

// Best constant of the Sobolev inequality on R^N, ||u||_p <= T_p ||grad u||_q
// with q = Np/(N+p). Requires 1 < q < N.
double talenti_constant(double p, int n_dim);

// Upper bound for the H^1_0 -> L^p embedding constant (norm ||grad u||_2) on
// a domain of volume at most volume_upper: |Omega|^{(2-q)/(2q)} T_p.
// p must lie in (2, inf) for N = 2 and (N/(N-1), 2N/(N-2)] for N >= 3.
double embed_dirichlet_upper(double p, int n_dim, double volume_upper);

// Embedding bound for the norm (||grad u||^2 + tau ||u||^2)^{1/2} given a
// lower bound lambda1 on the bottom of the spectrum. N = 2 needs p >= 2;
// N >= 3 needs p in [2, 2N/(N-2)]. Throws DomainError when lambda1 = tau = 0.
double embed_plum_upper(double p, int n_dim, double lambda1_lower, double tau);

// C(M) sqrt(1 + tau C(M)^2), rounded up.
double cm_tau(double c_m, double tau);

// A_m = sqrt(m^{2/m - 1} (m - 1)^{1 - 1/m}) for 1 < m < inf, 1 for m = 1.
// (A_inf = 1 as well; callers handle that case without an interval.)
Interval mizuguchi_a(const Interval& m);

// Enclosure of D_p for a rectangle (N = 2):
//   D_p = d^2 / (2 |R|) (A_r A_q A_{p'})^2 || |x|^{-1} ||_{L^r(U)},
// r = qp / ((q - 1)p + q), U = [-w, w] x [-h, h]. Requires 1 <= q <= p with
// p < 2q/(2 - q) when q < 2 and p < inf when q = 2 (DomainError otherwise).
// Throws QuadratureBudgetExceeded if the integral cannot be enclosed to
// relative width 1e-3.
Interval mizuguchi_dp_enclosure(const Rectangle& rect, double p, double q);
double mizuguchi_dp(const Rectangle& rect, double p, double q);

// C_p' over a partition into rectangles with disjoint interiors. Use
// p = q = infinity for the sup-norm case, which requires caller-supplied
// D_inf values (see the overload below) since D_p is only computed for the
// exponent range above. Throws PartitionInvalid.
double mizuguchi_cp(const std::vector<Rectangle>& partition, double p, double q);
// Same with caller-supplied D_p(Omega_i) upper bounds, one per rectangle.
double mizuguchi_cp(const std::vector<Rectangle>& partition, double p, double q,
                    const std::vector<double>& d_upper);

// Throws PartitionInvalid unless the rectangles are non-degenerate and
// pairwise interior-disjoint.
void check_partition(const std::vector<Rectangle>& partition);

}  // namespace nodalcert
