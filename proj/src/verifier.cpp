#include "nodalcert/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"
#include "nodalcert/errors.hpp"

namespace nodalcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double NonlinearityBound::p_star() const {
  if (n_dim <= 2) return kInf;
  return static_cast<double>(n_dim + 2) / static_cast<double>(n_dim - 2);
}

void NonlinearityBound::validate() const {
  if (n_dim < 2) throw DomainError("nonlinearity bound needs N >= 2");
  if (!std::isfinite(lambda)) throw DomainError("lambda must be finite");
  const double ps = p_star();
  for (const auto& t : terms) {
    if (!(t.a >= 0.0) || !std::isfinite(t.a)) throw DomainError("term coefficient must be finite and >= 0");
    if (!(t.p > 1.0 && t.p < ps) || !std::isfinite(t.p)) {
      throw DomainError("exponent " + fmt(t.p) + " is not subcritical");
    }
  }
  if (range && !(range->first <= range->second)) throw DomainError("empty validity range");
}

NonlinearityBound NonlinearityBound::emden(double lambda, double p, int n_dim) {
  NonlinearityBound nl;
  nl.lambda = lambda;
  nl.terms = {{1.0, p}};
  nl.n_dim = n_dim;
  nl.validate();
  return nl;
}

NonlinearityBound NonlinearityBound::allen_cahn(double epsilon, int n_dim) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("epsilon must be > 0");
  NonlinearityBound nl;
  nl.lambda = (Interval(1.0) / sqr(Interval(epsilon))).hi();
  nl.n_dim = n_dim;
  return nl;
}

const char* to_string(Rounding r) { return r == Rounding::Up ? "up" : "down"; }

const char* to_string(GlobalEmbedding g) {
  switch (g) {
    case GlobalEmbedding::Auto: return "auto";
    case GlobalEmbedding::Talenti: return "talenti";
    case GlobalEmbedding::Plum: return "plum";
    case GlobalEmbedding::Mizuguchi: return "mizuguchi";
    case GlobalEmbedding::User: return "user";
  }
  return "?";
}

const char* to_string(Theorem t) {
  switch (t) {
    case Theorem::Dirichlet: return "dirichlet";
    case Theorem::LinfOnly: return "linf_only";
    case Theorem::Emden: return "emden";
    case Theorem::AllenCahn: return "allen_cahn";
    case Theorem::Mixed: return "mixed";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified: return "certified";
    case Verdict::NotCertified: return "not certified";
    case Verdict::AssumptionViolation: return "assumption violation";
  }
  return "?";
}

SmallnessCheck check_smallness(const NonlinearityBound& nl, double lambda1_lower,
                               const std::vector<double>& cp_uppers,
                               const std::vector<double>& norm_uppers) {
  if (cp_uppers.size() != nl.terms.size() || norm_uppers.size() != nl.terms.size()) {
    throw DomainError("one constant and one norm bound per term expected");
  }
  SmallnessCheck out;
  Interval lhs(0.0);
  for (std::size_t i = 0; i < nl.terms.size(); ++i) {
    const auto& t = nl.terms[i];
    if (t.a == 0.0) continue;
    const double c = cp_uppers[i], n = norm_uppers[i];
    if (!(c >= 0.0) || !(n >= 0.0)) throw DomainError("constants and norms must be >= 0");
    if (!std::isfinite(c) || !std::isfinite(n)) {
      lhs = Interval(lhs.lo(), kInf);
      continue;
    }
    lhs += Interval(t.a) * sqr(Interval(c)) * pow(Interval(n), t.p - 1.0);
  }
  out.lhs = Bound::upper(lhs.hi());

  if (std::isinf(lambda1_lower) && lambda1_lower > 0.0) {
    out.rhs = Bound::lower(1.0);
  } else if (!(lambda1_lower > 0.0)) {
    // No usable eigenvalue bound: for lambda <= 0 the quotient only helps.
    out.rhs = Bound::lower(nl.lambda > 0.0 ? -kInf : 1.0);
  } else {
    out.rhs = Bound::lower((Interval(1.0) - Interval(nl.lambda) / Interval(lambda1_lower)).lo());
  }
  if (nl.lambda > 0.0 && nl.lambda >= lambda1_lower) {
    out.holds = false;
    if (out.diagnostic.empty()) {
      out.diagnostic = "lambda = " + fmt(nl.lambda) + " is not below the lambda_1 lower bound " +
                       fmt(lambda1_lower);
    }
    return out;
  }
  out.holds = out.lhs.value < out.rhs.value;
  if (!out.holds) out.diagnostic = "left side " + fmt(out.lhs.value) + " >= right side " + fmt(out.rhs.value);
  return out;
}

NdBounds nd_bounds(const CellClassification& cls, bool certified_no_domain_in_omega0) {
  auto lower = [&](Region closed, Label l) {
    int n = 0;
    for (const auto& c : components(cls, closed).components) {
      if (std::any_of(c.begin(), c.end(), [&](int idx) { return cls.labels[idx] == l; })) ++n;
    }
    return n;
  };
  NdBounds b;
  b.pnd.lower = lower(Region::PlusUnionZero, Label::Plus);
  b.nnd.lower = lower(Region::MinusUnionZero, Label::Minus);
  b.nd.lower = b.pnd.lower + b.nnd.lower;
  if (certified_no_domain_in_omega0) {
    b.pnd.upper = components(cls, Region::PlusRegion).count();
    b.nnd.upper = components(cls, Region::MinusRegion).count();
    b.nd.upper = *b.pnd.upper + *b.nnd.upper;
  }
  return b;
}

namespace {

enum class Inflation { H1, Linf };

struct Run {
  Theorem theorem;
  Inflation inflation;
  double rho = 0.0;
  const BoundarySpec* bc = nullptr;  // null: Dirichlet everywhere
  const std::map<int, double>* user_lambda1 = nullptr;
};

void trace(NodalReport& rep, const std::string& name, Bound b, TraceRole role) {
  rep.trace.push_back({name, b, role});
}

double domain_volume_upper(const Rectangle& d) { return d.area().hi(); }

double domain_lambda1(const Rectangle& d) { return lambda1_rectangle(d.width().hi(), d.height().hi()); }

// Dirichlet bound for C_q(Omega) chosen by the policy.
std::pair<double, std::string> dirichlet_global(double q, const Rectangle& d,
                                                const ConstantsPolicy& policy) {
  auto user = [&]() -> std::optional<double> {
    auto it = policy.user_c.find(q);
    if (it == policy.user_c.end()) return std::nullopt;
    return it->second;
  };
  switch (policy.global) {
    case GlobalEmbedding::Talenti:
      return {embed_dirichlet_upper(q, 2, domain_volume_upper(d)), "talenti"};
    case GlobalEmbedding::Plum:
      return {embed_plum_upper(q, 2, domain_lambda1(d), policy.tau), "plum"};
    case GlobalEmbedding::Mizuguchi:
      return {mizuguchi_cp({d}, q, 2.0), "mizuguchi"};
    case GlobalEmbedding::User: {
      const auto u = user();
      if (!u) throw DomainError("no user embedding constant for p = " + fmt(q));
      return {*u, "user: " + policy.user_c_provenance};
    }
    case GlobalEmbedding::Auto: break;
  }
  std::pair<double, std::string> best{embed_dirichlet_upper(q, 2, domain_volume_upper(d)), "talenti"};
  const double plum = embed_plum_upper(q, 2, domain_lambda1(d), policy.tau);
  if (plum < best.first) best = {plum, "plum"};
  if (const auto u = user(); u && *u < best.first) best = {*u, "user: " + policy.user_c_provenance};
  return best;
}

std::pair<double, std::string> global_constant(double q, const Rectangle& d,
                                               const ConstantsPolicy& policy,
                                               const BoundarySpec* bc) {
  if (bc == nullptr || bc->is_all_dirichlet()) return dirichlet_global(q, d, policy);
  if (policy.global == GlobalEmbedding::User) return dirichlet_global(q, d, policy);
  std::pair<double, std::string> best{mizuguchi_cp({d}, q, 2.0), "mizuguchi"};
  if (policy.global == GlobalEmbedding::Auto) {
    auto it = policy.user_c.find(q);
    if (it != policy.user_c.end() && it->second < best.first) {
      best = {it->second, "user: " + policy.user_c_provenance};
    }
  }
  return best;
}

Interval hull_of_ranges(const CellClassification& cls) {
  if (cls.ranges.empty()) return Interval::entire();
  Interval h = cls.ranges[0];
  for (const auto& r : cls.ranges) h = hull(h, r);
  return h;
}

double component_lp(const CellClassification& cls, const std::vector<int>& comp, double q) {
  std::vector<double> sups, areas;
  sups.reserve(comp.size());
  const double area = cls.cell_area_upper();
  for (int idx : comp) {
    const double s = cls.ranges[idx].mag();
    if (!std::isfinite(s)) return kInf;
    sups.push_back(s);
  }
  areas.assign(comp.size(), area);
  return lp_upper_from_sups(sups, areas, q);
}

NodalReport run(const CellClassification& cls, const NonlinearityBound& nl,
                const ConstantsPolicy& policy, const Run& r) {
  nl.validate();
  if (nl.n_dim != 2) throw DomainError("the grid verifier handles N = 2 only");

  NodalReport rep;
  rep.theorem_used = r.theorem;
  rep.nonlinearity = nl;
  rep.sigma = cls.sigma;
  rep.m = cls.m;
  if (r.inflation == Inflation::H1) rep.rho = r.rho;
  rep.cells_plus = cls.count(Label::Plus);
  rep.cells_minus = cls.count(Label::Minus);
  rep.cells_undetermined = cls.count(Label::Undetermined);
  rep.notes.push_back(
      "nodal domains are counted as components in the open domain; the boundary is not a nodal line");

  const Interval h = hull_of_ranges(cls);
  rep.uhat_range = {h.lo(), h.hi()};
  if (nl.range) {
    const double need_lo = rounding::sub_down(h.lo(), cls.sigma);
    const double need_hi = rounding::add_up(h.hi(), cls.sigma);
    if (!(nl.range->first <= need_lo && need_hi <= nl.range->second)) {
      throw RangeViolation("nonlinearity bound valid on [" + fmt(nl.range->first) + ", " +
                           fmt(nl.range->second) + "] but u ranges over [" + fmt(need_lo) + ", " +
                           fmt(need_hi) + "]");
    }
  }

  if (has_sign_conflict(cls)) {
    rep.verdict = Verdict::NotCertified;
    rep.notes.push_back("a Plus cell touches a Minus cell; the range enclosures are inconsistent");
    rep.counts = nd_bounds(cls, false);
    return rep;
  }
  if (rep.cells_undetermined == cls.size()) {
    rep.verdict = Verdict::AssumptionViolation;
    rep.notes.push_back("Omega_0 covers the whole domain");
    rep.counts = nd_bounds(cls, false);
    return rep;
  }

  const auto zero = components(cls, Region::ZeroRegion);
  std::vector<int> all_zero;
  for (const auto& c : zero.components) all_zero.insert(all_zero.end(), c.begin(), c.end());
  rep.omega0_volume = Bound::upper(region_volume_upper(cls, all_zero));
  trace(rep, "|Omega_0|", rep.omega0_volume, TraceRole::UpperInput);
  if (!all_zero.empty()) {
    rep.lambda1_total_volume = Bound::lower(lambda1_lower_corollary(2, rep.omega0_volume.value));
    trace(rep, "lambda_1 from |Omega_0|", *rep.lambda1_total_volume, TraceRole::LowerInput);
  }

  // Constants on the whole domain, one per term.
  const double lambda1_domain = domain_lambda1(cls.domain);
  std::vector<double> c_global(nl.terms.size(), 0.0), c_dir_domain(nl.terms.size(), 0.0);
  for (std::size_t i = 0; i < nl.terms.size(); ++i) {
    const double q = nl.terms[i].p + 1.0;
    const auto g = global_constant(q, cls.domain, policy, r.bc);
    c_global[i] = g.first;
    rep.constants.push_back({"C_" + fmt(q) + "(Omega)", Bound::upper(g.first), g.second});
    trace(rep, "C_" + fmt(q) + "(Omega)", Bound::upper(g.first), TraceRole::UpperInput);
    const auto d = dirichlet_global(q, cls.domain, ConstantsPolicy{});
    c_dir_domain[i] = d.first;
  }
  if (!zero.components.empty()) {
    rep.constants.push_back({"lambda_1(Omega) Dirichlet", Bound::lower(lambda1_domain), "rectangle"});
    trace(rep, "lambda_1(Omega)", Bound::lower(lambda1_domain), TraceRole::LowerInput);
  }
  if (r.theorem == Theorem::AllenCahn && nl.lambda < lambda1_domain) {
    rep.notes.push_back("eps^-2 is below lambda_1(Omega): only the trivial solution exists");
  }

  const bool neumann_free = r.bc == nullptr || !r.bc->is_all_neumann();
  for (int j = 0; j < zero.count(); ++j) {
    const auto& comp = zero.components[j];
    ComponentCheck cc;
    cc.id = j;
    cc.cells = static_cast<int>(comp.size());
    cc.volume = Bound::upper(region_volume_upper(cls, comp));
    const std::string tag = "component " + std::to_string(j) + ": ";
    trace(rep, tag + "volume", cc.volume, TraceRole::UpperInput);

    bool case2 = false;
    if (r.bc != nullptr) {
      const auto contact = boundary_contact(cls, comp, *r.bc);
      cc.touches_neumann = contact.touches_neumann;
      case2 = contact.neumann_measure_positive;
      cc.boundary_case = case2 ? 2 : 1;
    }

    double lam1 = 0.0;
    if (!case2) {
      lam1 = lambda1_lower_corollary(2, cc.volume.value);
      cc.lambda1_method = "li-yau";
      if (lambda1_domain > lam1) {
        lam1 = lambda1_domain;
        cc.lambda1_method = "rectangle (domain monotonicity)";
      }
    } else {
      const bool have = r.user_lambda1 != nullptr && r.user_lambda1->count(j) > 0;
      if (have) {
        lam1 = r.user_lambda1->at(j);
        cc.lambda1_method = "user";
      } else if (nl.lambda > 0.0) {
        throw MissingUserLambda1("component " + std::to_string(j) +
                                 " meets the Neumann boundary and lambda > 0; supply its lambda_1");
      } else {
        lam1 = kInf;
        cc.lambda1_method = "dropped (lambda <= 0)";
      }
    }
    cc.lambda1 = Bound::lower(lam1);
    trace(rep, tag + "lambda_1", cc.lambda1, TraceRole::LowerInput);

    std::vector<double> cs, ns;
    std::vector<Rectangle> rects;
    if (case2 && !nl.terms.empty()) {
      rects.reserve(comp.size());
      for (int idx : comp) rects.push_back(cls.cell_rect(idx));
    }
    for (std::size_t i = 0; i < nl.terms.size(); ++i) {
      const double q = nl.terms[i].p + 1.0;
      double c = 0.0;
      std::string method;
      if (!case2) {
        c = embed_dirichlet_upper(q, 2, cc.volume.value);
        method = "talenti";
        const double plum = embed_plum_upper(q, 2, lam1, 0.0);
        if (plum < c) c = plum, method = "plum";
        if (c_dir_domain[i] < c) c = c_dir_domain[i], method = "domain dirichlet";
        if (neumann_free && c_global[i] < c) c = c_global[i], method = "domain";
      } else {
        c = mizuguchi_cp(rects, q, 2.0);
        method = "mizuguchi";
        if (neumann_free && c_global[i] < c) c = c_global[i], method = "domain";
      }
      cc.embedding.push_back(Bound::upper(c));
      cc.embedding_method.push_back(method);
      trace(rep, tag + "C_" + fmt(q), Bound::upper(c), TraceRole::UpperInput);

      const double base = component_lp(cls, comp, q);
      double infl = 0.0;
      if (r.inflation == Inflation::H1) {
        infl = rounding::mul_up(c_global[i], r.rho);
      } else {
        infl = (Interval(cls.sigma) * pow(Interval(cc.volume.value), 1.0 / q)).hi();
      }
      const double n = std::isfinite(base) ? rounding::add_up(base, infl) : kInf;
      cc.norm.push_back(Bound::upper(n));
      trace(rep, tag + "norm L^" + fmt(q), Bound::upper(n), TraceRole::UpperInput);
      cs.push_back(c);
      ns.push_back(n);
    }

    const auto chk = check_smallness(nl, lam1, cs, ns);
    cc.lhs = chk.lhs;
    cc.rhs = chk.rhs;
    cc.holds = chk.holds;
    cc.diagnostic = chk.diagnostic;
    trace(rep, tag + "lhs", cc.lhs, TraceRole::LeftSide);
    trace(rep, tag + "rhs", cc.rhs, TraceRole::RightSide);
    if (!cc.holds && !rep.failing_component) rep.failing_component = j;
    rep.per_component.push_back(std::move(cc));
  }

  const bool ok = !rep.failing_component.has_value();
  rep.verdict = ok ? Verdict::Certified : Verdict::NotCertified;
  rep.counts = nd_bounds(cls, ok);
  if (r.bc != nullptr) {
    rep.notes.push_back("case 2 embedding constants use C_p' with q = 2 over the component cells");
  }
  return rep;
}

}  // namespace

NodalReport verify_dirichlet(const CellClassification& cls, double rho, const NonlinearityBound& nl,
                             const ConstantsPolicy& policy) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw DomainError("rho must be finite and >= 0");
  return run(cls, nl, policy, {Theorem::Dirichlet, Inflation::H1, rho});
}

NodalReport verify_dirichlet(const CoefficientField& field, double rho, double sigma,
                             const NonlinearityBound& nl, int m, const ConstantsPolicy& policy,
                             ClassifyOptions opts) {
  nl.validate();
  return verify_dirichlet(classify(field, sigma, m, opts), rho, nl, policy);
}

NodalReport verify_linf_only(const CellClassification& cls, const NonlinearityBound& nl) {
  return run(cls, nl, ConstantsPolicy{}, {Theorem::LinfOnly, Inflation::Linf});
}

NodalReport verify_linf_only(const CoefficientField& field, double sigma,
                             const NonlinearityBound& nl, int m, ClassifyOptions opts) {
  nl.validate();
  return verify_linf_only(classify(field, sigma, m, opts), nl);
}

NodalReport verify_emden(const CellClassification& cls, double rho, double lambda, double p,
                         const ConstantsPolicy& policy) {
  auto rep = verify_dirichlet(cls, rho, NonlinearityBound::emden(lambda, p), policy);
  rep.theorem_used = Theorem::Emden;
  return rep;
}

NodalReport verify_emden(const CoefficientField& field, double rho, double sigma, double lambda,
                         double p, int m, const ConstantsPolicy& policy, ClassifyOptions opts) {
  NonlinearityBound::emden(lambda, p);
  return verify_emden(classify(field, sigma, m, opts), rho, lambda, p, policy);
}

NodalReport verify_allen_cahn(const CellClassification& cls, double rho, double epsilon) {
  if (!(rho >= 0.0)) throw DomainError("rho must be >= 0");
  auto rep = run(cls, NonlinearityBound::allen_cahn(epsilon), ConstantsPolicy{},
                 {Theorem::AllenCahn, Inflation::H1, rho});
  return rep;
}

NodalReport verify_allen_cahn(const CoefficientField& field, double rho, double sigma,
                              double epsilon, int m, ClassifyOptions opts) {
  NonlinearityBound::allen_cahn(epsilon);
  return verify_allen_cahn(classify(field, sigma, m, opts), rho, epsilon);
}

NodalReport verify_mixed(const CellClassification& cls, double rho, const NonlinearityBound& nl,
                         const BoundarySpec& bc, const std::map<int, double>& user_lambda1,
                         const ConstantsPolicy& policy) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw DomainError("rho must be finite and >= 0");
  bc.validate();
  return run(cls, nl, policy, {Theorem::Mixed, Inflation::H1, rho, &bc, &user_lambda1});
}

NodalReport verify_mixed(const CoefficientField& field, double rho, double sigma,
                         const NonlinearityBound& nl, const BoundarySpec& bc, int m,
                         const std::map<int, double>& user_lambda1, const ConstantsPolicy& policy,
                         ClassifyOptions opts) {
  nl.validate();
  bc.validate();
  return verify_mixed(classify(field, sigma, m, opts), rho, nl, bc, user_lambda1, policy);
}

AuditResult audit_rounding(const NodalReport& report) {
  AuditResult a;
  auto expect = [&](const std::string& what, const Bound& b, Rounding want) {
    ++a.checked;
    if (b.rounding != want) {
      a.ok = false;
      a.violations.push_back(what + " is rounded " + to_string(b.rounding) + ", expected " +
                             to_string(want));
    }
  };
  for (const auto& c : report.per_component) {
    const std::string tag = "component " + std::to_string(c.id) + " ";
    expect(tag + "lhs", c.lhs, Rounding::Up);
    expect(tag + "rhs", c.rhs, Rounding::Down);
    expect(tag + "volume", c.volume, Rounding::Up);
    expect(tag + "lambda_1", c.lambda1, Rounding::Down);
    for (const auto& b : c.embedding) expect(tag + "embedding", b, Rounding::Up);
    for (const auto& b : c.norm) expect(tag + "norm", b, Rounding::Up);
  }
  for (const auto& t : report.trace) {
    const bool up = t.role == TraceRole::LeftSide || t.role == TraceRole::UpperInput;
    expect("trace " + t.name, t.value, up ? Rounding::Up : Rounding::Down);
  }
  expect("|Omega_0|", report.omega0_volume, Rounding::Up);
  for (const auto& c : report.constants) {
    const bool lower = c.name.rfind("lambda", 0) == 0;
    expect("constant " + c.name, c.value, lower ? Rounding::Down : Rounding::Up);
  }
  return a;
}

namespace {

using nlohmann::json;

json bound_json(const Bound& b) {
  json j;
  if (std::isfinite(b.value)) {
    j["value"] = b.value;
  } else {
    j["value"] = b.value > 0 ? "inf" : "-inf";
  }
  j["rounding"] = to_string(b.rounding);
  return j;
}

json count_json(const CountBound& c) {
  json j;
  j["lower"] = c.lower;
  if (c.upper) {
    j["upper"] = *c.upper;
  } else {
    j["upper"] = "unbounded";
  }
  return j;
}

const char* role_name(TraceRole r) {
  switch (r) {
    case TraceRole::LeftSide: return "lhs";
    case TraceRole::RightSide: return "rhs";
    case TraceRole::UpperInput: return "upper";
    case TraceRole::LowerInput: return "lower";
  }
  return "?";
}

}  // namespace

std::string to_json(const NodalReport& r, int indent) {
  json j;
  j["theorem_used"] = to_string(r.theorem_used);
  j["verdict"] = to_string(r.verdict);
  j["certified"] = r.certified();
  j["pnd"] = count_json(r.counts.pnd);
  j["nnd"] = count_json(r.counts.nnd);
  j["nd"] = count_json(r.counts.nd);
  if (r.failing_component) {
    j["failing_component"] = *r.failing_component;
  } else {
    j["failing_component"] = nullptr;
  }

  json comps = json::array();
  for (const auto& c : r.per_component) {
    json e;
    e["id"] = c.id;
    e["cells"] = c.cells;
    e["volume"] = bound_json(c.volume);
    e["lambda1"] = bound_json(c.lambda1);
    e["lambda1_method"] = c.lambda1_method;
    json emb = json::array();
    for (std::size_t i = 0; i < c.embedding.size(); ++i) {
      json x = bound_json(c.embedding[i]);
      x["method"] = c.embedding_method[i];
      x["norm"] = bound_json(c.norm[i]);
      emb.push_back(x);
    }
    e["terms"] = emb;
    e["lhs"] = bound_json(c.lhs);
    e["rhs"] = bound_json(c.rhs);
    e["verdict"] = c.holds ? "passed" : "failed";
    e["boundary_case"] = c.boundary_case;
    e["touches_neumann"] = c.touches_neumann;
    if (!c.diagnostic.empty()) e["diagnostic"] = c.diagnostic;
    comps.push_back(e);
  }
  j["per_component"] = comps;

  json in;
  if (r.rho) {
    in["rho"] = *r.rho;
  } else {
    in["rho"] = nullptr;
  }
  in["sigma"] = r.sigma;
  in["m"] = r.m;
  in["certificate_source"] = r.certificate_source;
  json nl;
  nl["lambda"] = r.nonlinearity.lambda;
  nl["n_dim"] = r.nonlinearity.n_dim;
  json terms = json::array();
  for (const auto& t : r.nonlinearity.terms) terms.push_back({{"a", t.a}, {"p", t.p}});
  nl["terms"] = terms;
  if (r.nonlinearity.range) {
    nl["range"] = {r.nonlinearity.range->first, r.nonlinearity.range->second};
  } else {
    nl["range"] = nullptr;
  }
  in["nonlinearity"] = nl;
  json consts = json::array();
  for (const auto& c : r.constants) {
    json x = bound_json(c.value);
    x["name"] = c.name;
    x["method"] = c.method;
    consts.push_back(x);
  }
  in["constants"] = consts;
  j["inputs"] = in;

  json cls;
  cls["plus"] = r.cells_plus;
  cls["minus"] = r.cells_minus;
  cls["undetermined"] = r.cells_undetermined;
  cls["omega0_volume"] = bound_json(r.omega0_volume);
  if (r.lambda1_total_volume) {
    cls["lambda1_total_volume"] = bound_json(*r.lambda1_total_volume);
  } else {
    cls["lambda1_total_volume"] = nullptr;
  }
  cls["uhat_range"] = {r.uhat_range.first, r.uhat_range.second};
  j["classification"] = cls;

  json tr = json::array();
  for (const auto& t : r.trace) {
    json x = bound_json(t.value);
    x["name"] = t.name;
    x["role"] = role_name(t.role);
    tr.push_back(x);
  }
  j["trace"] = tr;
  j["notes"] = r.notes;
  return j.dump(indent);
}

}  // namespace nodalcert
