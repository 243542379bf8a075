#pragma once

// Certified bounds on the number of nodal domains of a verified solution u
// of -Laplace u = f(u), given an approximation u_hat, an H^1_0 error rho
// and/or an L^inf error sigma.
//
// Every Omega_0 component must pass
//   sum_i a_i C_i(Omega_0^j)^2 (||u_hat||_{L^{p_i+1}(Omega_0^j)} + infl_i)^{p_i-1}
//     < 1 - lambda / lambda_1(Omega_0^j)
// with infl_i = C_{p_i+1}(Omega) rho (H^1_0 error) or
// sigma |Omega_0^j|^{1/(p_i+1)} (L^inf error only). Left sides are rounded
// up and right sides down.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nodalcert/constants.hpp"
#include "nodalcert/grid.hpp"

namespace nodalcert {

struct NonlinearityTerm {
  double a = 0.0;  // >= 0
  double p = 0.0;  // in (1, p*)
};

// t f(t) <= lambda t^2 + sum a_i |t|^{p_i + 1}, for all t or for t in range.
struct NonlinearityBound {
  double lambda = 0.0;
  std::vector<NonlinearityTerm> terms;
  std::optional<std::pair<double, double>> range;
  int n_dim = 2;

  // inf for N = 2, (N + 2) / (N - 2) otherwise.
  [[nodiscard]] double p_star() const;
  // Throws DomainError.
  void validate() const;

  static NonlinearityBound emden(double lambda, double p, int n_dim = 2);
  // f(t) = eps^-2 (t - t^3) satisfies t f(t) <= eps^-2 t^2.
  static NonlinearityBound allen_cahn(double epsilon, int n_dim = 2);
};

enum class Rounding { Up, Down };
const char* to_string(Rounding r);

struct Bound {
  double value = 0.0;
  Rounding rounding = Rounding::Up;
  static Bound upper(double v) { return {v, Rounding::Up}; }
  static Bound lower(double v) { return {v, Rounding::Down}; }
};

struct SmallnessCheck {
  bool holds = false;
  Bound lhs = Bound::upper(0.0);
  Bound rhs = Bound::lower(0.0);
  std::string diagnostic;
};

// sum a_i C_i^2 n_i^{p_i - 1} < 1 - lambda / lambda1_lower. lambda1_lower =
// inf stands for an empty set (the quotient is dropped). Holds only if the
// strict inequality survives rounding.
SmallnessCheck check_smallness(const NonlinearityBound& nl, double lambda1_lower,
                               const std::vector<double>& cp_uppers,
                               const std::vector<double>& norm_uppers);

enum class GlobalEmbedding { Auto, Talenti, Plum, Mizuguchi, User };
const char* to_string(GlobalEmbedding g);

// How C_{p+1}(Omega) is obtained. Auto takes the smaller of the Talenti and
// Plum bounds on a Dirichlet domain and C_p' (q = 2) otherwise.
struct ConstantsPolicy {
  GlobalEmbedding global = GlobalEmbedding::Auto;
  // Upper bounds for C_{p}(Omega) keyed by the exponent p (= p_i + 1), used
  // by User and preferred by Auto when smaller.
  std::map<double, double> user_c;
  std::string user_c_provenance;
  // tau of the norm the H^1_0 error is measured in (Plum bound only).
  double tau = 0.0;
};

struct ConstantUsed {
  std::string name;
  Bound value;
  std::string method;
};

enum class Theorem { Dirichlet, LinfOnly, Emden, AllenCahn, Mixed };
const char* to_string(Theorem t);

enum class Verdict { Certified, NotCertified, AssumptionViolation };
const char* to_string(Verdict v);

struct ComponentCheck {
  int id = 0;
  int cells = 0;
  Bound volume = Bound::upper(0.0);
  Bound lambda1 = Bound::lower(0.0);  // value inf when dropped
  std::string lambda1_method;
  // One entry per nonlinearity term.
  std::vector<Bound> embedding;
  std::vector<std::string> embedding_method;
  std::vector<Bound> norm;  // ||u_hat||_{L^{p+1}} + inflation
  Bound lhs = Bound::upper(0.0);
  Bound rhs = Bound::lower(0.0);
  bool holds = false;
  // Mixed problems: 1 or 2; 0 otherwise.
  int boundary_case = 0;
  bool touches_neumann = false;
  std::string diagnostic;
};

struct CountBound {
  int lower = 0;
  std::optional<int> upper;  // nullopt = unbounded
};

struct NdBounds {
  CountBound pnd, nnd, nd;
};

enum class TraceRole { LeftSide, RightSide, UpperInput, LowerInput };

struct TraceEntry {
  std::string name;
  Bound value;
  TraceRole role;
};

struct NodalReport {
  Theorem theorem_used = Theorem::Dirichlet;
  Verdict verdict = Verdict::NotCertified;
  NdBounds counts;
  std::vector<ComponentCheck> per_component;
  std::optional<int> failing_component;

  // Inputs echo.
  std::optional<double> rho;
  double sigma = 0.0;
  int m = 0;
  std::string certificate_source = "certified-external";
  NonlinearityBound nonlinearity;
  std::vector<ConstantUsed> constants;

  // Classification summary.
  int cells_plus = 0, cells_minus = 0, cells_undetermined = 0;
  Bound omega0_volume = Bound::upper(0.0);
  // lambda_1 lower bound from the total Omega_0 volume, for comparison with
  // the per-component values actually used.
  std::optional<Bound> lambda1_total_volume;
  std::pair<double, double> uhat_range{0.0, 0.0};

  std::vector<TraceEntry> trace;
  std::vector<std::string> notes;

  [[nodiscard]] bool certified() const { return verdict == Verdict::Certified; }
};

// pnd = [#components of Omega_+ u Omega_0 holding a Plus cell,
//        #components of Omega_+], nnd likewise, nd the sum. Only the lower
// bounds are reported when certified_no_domain_in_omega0 is false.
NdBounds nd_bounds(const CellClassification& cls, bool certified_no_domain_in_omega0 = true);

// Each operation has a field form, which classifies at level m first, and a
// classification form for prebuilt grids. The classification form reads
// u_hat only through cls.ranges.
NodalReport verify_dirichlet(const CoefficientField& field, double rho, double sigma,
                             const NonlinearityBound& nl, int m, const ConstantsPolicy& policy = {},
                             ClassifyOptions opts = {});
NodalReport verify_dirichlet(const CellClassification& cls, double rho, const NonlinearityBound& nl,
                             const ConstantsPolicy& policy = {});

NodalReport verify_linf_only(const CoefficientField& field, double sigma,
                             const NonlinearityBound& nl, int m, ClassifyOptions opts = {});
NodalReport verify_linf_only(const CellClassification& cls, const NonlinearityBound& nl);

NodalReport verify_emden(const CoefficientField& field, double rho, double sigma, double lambda,
                         double p, int m, const ConstantsPolicy& policy = {},
                         ClassifyOptions opts = {});
NodalReport verify_emden(const CellClassification& cls, double rho, double lambda, double p,
                         const ConstantsPolicy& policy = {});

// Only eps^-2 < lambda_1(Omega_0^j) is needed; rho does not enter.
NodalReport verify_allen_cahn(const CoefficientField& field, double rho, double sigma,
                              double epsilon, int m, ClassifyOptions opts = {});
NodalReport verify_allen_cahn(const CellClassification& cls, double rho, double epsilon);

// Components with positive-measure Neumann contact (case 2) take lambda_1
// from user_lambda1 (keyed by component id) and C from C_p' (q = 2) over the
// component's cells. Throws MissingUserLambda1 for a case-2 component
// without a user value when lambda > 0.
NodalReport verify_mixed(const CoefficientField& field, double rho, double sigma,
                         const NonlinearityBound& nl, const BoundarySpec& bc, int m,
                         const std::map<int, double>& user_lambda1,
                         const ConstantsPolicy& policy = {}, ClassifyOptions opts = {});
NodalReport verify_mixed(const CellClassification& cls, double rho, const NonlinearityBound& nl,
                         const BoundarySpec& bc, const std::map<int, double>& user_lambda1,
                         const ConstantsPolicy& policy = {});

struct AuditResult {
  bool ok = true;
  int checked = 0;
  std::vector<std::string> violations;
};

// Walks the conditions and the trace: left sides and upper inputs must be
// rounded up, right sides and lower inputs down.
AuditResult audit_rounding(const NodalReport& report);

// JSON text of the report; every bound carries its rounding tag.
std::string to_json(const NodalReport& report, int indent = 2);

}  // namespace nodalcert
