// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any fails. Tolerances are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "nodalcert/constants.hpp"
#include "nodalcert/errors.hpp"
#include "nodalcert/grid.hpp"
#include "nodalcert/solver.hpp"
#include "nodalcert/verifier.hpp"
#include "oracle.hpp"

using namespace nodalcert;

namespace {

const double kPi = 3.14159265358979323846;

// Pinned tolerances.
const double kTolTalenti = 1e-6;
const double kTolPlum = 1e-6;
const double kTolLiYau = 1e-12;
const double kTolCmTau = 1e-6;
const double kMaxSigma = 1e-3;
const double kMaxReplaySeconds = 1.0;
const double kMaxEndToEndSeconds = 300.0;

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
  char b[64];
  std::snprintf(b, sizeof b, "%.10g", x);
  return b;
}

// Exact check that rhs <= 1 - lambda / lambda1 and lambda >= eps^-2.
bool rhs_rounded_down(double rhs, double lambda, double lambda1) {
  oracle::Rational r(rhs), l(lambda), l1(lambda1), q, exact;
  mpq_div(q.get(), l.get(), l1.get());
  mpq_set_ui(exact.get(), 1, 1);
  mpq_sub(exact.get(), exact.get(), q.get());
  return mpq_cmp(r.get(), exact.get()) <= 0;
}

bool lambda_rounded_up(double lambda, double eps) {
  oracle::Rational l(lambda), e(eps), e2, one, inv;
  mpq_mul(e2.get(), e.get(), e.get());
  mpq_set_ui(one.get(), 1, 1);
  mpq_div(inv.get(), one.get(), e2.get());
  return mpq_cmp(l.get(), inv.get()) >= 0;
}

// ---------------------------------------------------------------------------
// 1. Condition replay

std::vector<SmallnessCheck> g_replay_checks;

Outcome condition_replay() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  struct Row {
    double eps, lambda1, eps_m2;
  };
  const Row rows[] = {{0.1, 704.7, 100.0}, {0.08, 574.1, 156.3}, {0.06, 459.0, 277.8}};
  for (const auto& r : rows) {
    const auto nl = NonlinearityBound::allen_cahn(r.eps);
    if (!(std::abs(nl.lambda - r.eps_m2) <= 0.05)) o.fail("eps^-2 mismatch at eps " + fmt(r.eps));
    if (!lambda_rounded_up(nl.lambda, r.eps)) o.fail("eps^-2 not rounded up at eps " + fmt(r.eps));
    const auto ok = check_smallness(nl, r.lambda1, {}, {});
    g_replay_checks.push_back(ok);
    if (!ok.holds) o.fail("not certified at eps " + fmt(r.eps));
    if (!rhs_rounded_down(ok.rhs.value, nl.lambda, r.lambda1)) o.fail("rhs not rounded down");
    // lambda_1 just below eps^-2, and exactly at it.
    for (double l1 : {nl.lambda * (1.0 - 1e-9), nl.lambda, r.eps_m2 - 0.1}) {
      const auto bad = check_smallness(nl, l1, {}, {});
      g_replay_checks.push_back(bad);
      if (bad.holds) o.fail("perturbed lambda_1 = " + fmt(l1) + " still certified");
    }
  }
  const double t = seconds_since(t0);
  if (t >= kMaxReplaySeconds) o.fail("took " + fmt(t) + " s");
  if (o.pass) o.detail = "eps = 0.1, 0.08, 0.06 certified; perturbed cases not certified; " + fmt(t) + " s";
  return o;
}

// ---------------------------------------------------------------------------
// 2. Count-bound replay

std::vector<NodalReport> g_count_reports;

Outcome count_replay() {
  Outcome o;
  struct Case {
    const char* name;
    const std::vector<std::string>* rows;
    int lo, hi;
  };
  const Case cases[] = {{"A", &fixtures::kTypeA, 2, 3},
                        {"B", &fixtures::kTypeB, 2, 4},
                        {"C", &fixtures::kTypeC, 2, 2}};
  std::string got;
  for (const auto& c : cases) {
    const auto cls = fixtures::picture(*c.rows, 8);
    const auto b = nd_bounds(cls);
    const int hi = b.nd.upper ? *b.nd.upper : -1;
    got += std::string(c.name) + " [" + std::to_string(b.nd.lower) + "," + std::to_string(hi) + "] ";
    if (b.nd.lower != c.lo || hi != c.hi) o.fail(std::string("type ") + c.name + " gives " + got);
    // The same counts through the full Allen-Cahn check (eps^-2 = 25).
    const auto rep = verify_allen_cahn(cls, 0.0, 0.2);
    g_count_reports.push_back(rep);
    if (!rep.certified()) o.fail(std::string("type ") + c.name + " not certified at eps = 0.2");
    if (rep.counts.nd.lower != c.lo || rep.counts.nd.upper != std::optional<int>(c.hi)) {
      o.fail(std::string("type ") + c.name + " report counts differ");
    }
  }
  if (o.pass) o.detail = got;
  return o;
}

// ---------------------------------------------------------------------------
// 3. Closed-form constants

Outcome closed_forms() {
  Outcome o;
  const double t = talenti_constant(4.0, 2);
  if (!(std::abs(t - 1.0 / kPi) <= kTolTalenti)) o.fail("T_4 = " + fmt(t));
  const double pl = embed_plum_upper(4.0, 2, 2.0 * kPi * kPi, 0.0);
  if (!(std::abs(pl - 1.0 / std::sqrt(2.0 * kPi)) <= kTolPlum)) o.fail("Plum = " + fmt(pl));
  const double ly = liyau_lower(1, 2, 1.0);
  if (!(std::abs(ly - 2.0 * kPi) <= kTolLiYau * 2.0 * kPi)) o.fail("Li-Yau = " + fmt(ly));
  if (!(ly <= 2.0 * kPi * kPi)) o.fail("Li-Yau above the true eigenvalue");
  const double cm = cm_tau(6.0e-3, 102.3);
  if (!(std::abs(cm - 6.0111e-3) <= kTolCmTau)) o.fail("C^tau(M) = " + fmt(cm));
  if (o.pass) {
    o.detail = "T_4 " + fmt(t) + ", Plum " + fmt(pl) + ", Li-Yau " + fmt(ly) + ", C^tau(M) " + fmt(cm);
  }
  return o;
}

// ---------------------------------------------------------------------------
// 4. Volume arithmetic

Outcome volume_arithmetic() {
  Outcome o;
  std::mt19937_64 rng(4);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = std::uniform_int_distribution<int>(0, 22)(rng);
    const int n = 1 << m;
    const int k = std::uniform_int_distribution<int>(0, n)(rng);
    const auto cls = make_classification(m, Rectangle::unit(), 0.0);
    std::vector<int> cells(k);
    for (int i = 0; i < k; ++i) cells[i] = i;
    const double v = region_volume_upper(cls, cells);
    // Exact value k / 2^m; representable, so rounding up returns it.
    oracle::Rational exact, got(v);
    mpq_set_ui(exact.get(), static_cast<unsigned long>(k), 1);
    mpq_div_2exp(exact.get(), exact.get(), static_cast<unsigned long>(m));
    if (mpq_cmp(got.get(), exact.get()) != 0) o.fail("k = " + std::to_string(k) + ", m = " + std::to_string(m));
    ++checked;
  }
  if (o.pass) o.detail = std::to_string(checked) + " random (k, m) exact";
  return o;
}

// ---------------------------------------------------------------------------
// 5. Component oracle

Outcome component_oracle() {
  Outcome o;
  std::mt19937_64 rng(5);
  const Region regions[] = {Region::PlusRegion, Region::MinusRegion, Region::ZeroRegion,
                            Region::PlusUnionZero, Region::MinusUnionZero};
  int mismatches = 0, compared = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto c = make_classification(12, Rectangle::unit(), 0.0);  // 64 x 64
    std::discrete_distribution<int> pick({1.0 + trial % 3, 1.0, 0.5 + trial % 5});
    for (auto& l : c.labels) l = static_cast<Label>(pick(rng));
    for (Region r : regions) {
      const bool corners = natural_adjacency(r) == Adjacency::EdgeAndCorner;
      auto member = [&](Label l) {
        switch (r) {
          case Region::PlusRegion: return l == Label::Plus;
          case Region::MinusRegion: return l == Label::Minus;
          case Region::ZeroRegion: return l == Label::Undetermined;
          case Region::PlusUnionZero: return l != Label::Minus;
          case Region::MinusUnionZero: return l != Label::Plus;
        }
        return false;
      };
      ++compared;
      if (components(c, r).count() != fixtures::flood_fill_count(c.labels, c.nx, c.ny, member, corners)) {
        ++mismatches;
      }
    }
  }
  if (mismatches) o.fail(std::to_string(mismatches) + " mismatches");
  else o.detail = std::to_string(compared) + " comparisons (1000 labelings, edge and edge+corner), 0 mismatches";
  return o;
}

// ---------------------------------------------------------------------------
// 6. Interval soundness

Outcome interval_soundness() {
  Outcome o;
  const int trials = 1000000;
  long violations = 0;
  oracle::DoubleGen gen(6);
  for (auto op : {oracle::Op::Add, oracle::Op::Sub, oracle::Op::Mul, oracle::Op::Div}) {
    for (int i = 0; i < trials; ++i) {
      const double x = gen(), y = gen();
      if (op == oracle::Op::Div && y == 0.0) {
        --i;
        continue;
      }
      const Interval a(x), b(y);
      Interval r = a;
      switch (op) {
        case oracle::Op::Add: r = a + b; break;
        case oracle::Op::Sub: r = a - b; break;
        case oracle::Op::Mul: r = a * b; break;
        case oracle::Op::Div: r = a / b; break;
      }
      if (!oracle::exact_result_in(op, x, y, r)) ++violations;
    }
  }
  // Inclusion isotonicity on nested intervals.
  oracle::DoubleGen ig(66, 20);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  auto nested = [&](const Interval& outer) {
    const double p = outer.lo() + frac(ig.engine()) * (outer.hi() - outer.lo());
    const double q = outer.lo() + frac(ig.engine()) * (outer.hi() - outer.lo());
    return Interval(std::max(outer.lo(), std::min(p, q)), std::min(outer.hi(), std::max(p, q)));
  };
  long iso_bad = 0;
  for (int i = 0; i < 100000; ++i) {
    const double x1 = ig(), x2 = ig(), y1 = ig(), y2 = ig();
    const Interval a(std::min(x1, x2), std::max(x1, x2)), b(std::min(y1, y2), std::max(y1, y2));
    const Interval a2 = nested(a), b2 = nested(b);
    if (!(a2 + b2).subset_of(a + b) || !(a2 - b2).subset_of(a - b) || !(a2 * b2).subset_of(a * b)) ++iso_bad;
    if (!b.contains_zero() && !(a2 / b2).subset_of(a / b)) ++iso_bad;
    if (!sqr(a2).subset_of(sqr(a))) ++iso_bad;
  }
  if (violations) o.fail(std::to_string(violations) + " containment violations");
  if (iso_bad) o.fail(std::to_string(iso_bad) + " isotonicity failures");
  if (o.pass) o.detail = "4 x 10^6 GMP containment trials and 10^5 nested pairs, 0 violations";
  return o;
}

// ---------------------------------------------------------------------------
// 7. Nesting

Outcome nesting() {
  Outcome o;
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = fixtures::random_field(rng, 10);
    double prev = 2.0;
    for (int m : {8, 10, 12, 14}) {
      const auto cls = classify(f, 0.02, m);
      std::vector<int> zero;
      for (int k = 0; k < cls.size(); ++k) {
        if (cls.labels[k] == Label::Undetermined) zero.push_back(k);
      }
      const double v = region_volume_upper(cls, zero);
      if (v > prev) o.fail("field " + std::to_string(trial) + ": |Omega_0| grows at m = " + std::to_string(m));
      prev = v;
    }
  }
  if (o.pass) o.detail = "20 fields, m = 8, 10, 12, 14, non-increasing";
  return o;
}

// ---------------------------------------------------------------------------
// 8. End to end

std::vector<NodalReport> g_e2e_reports;

// A component of cells is a ring when it avoids the border and its
// complement falls apart into at least two edge-connected pieces.
bool interior_ring(const CellClassification& cls, const std::vector<int>& comp) {
  std::vector<char> in(cls.size(), 0);
  for (int k : comp) {
    const int ix = k % cls.nx, iy = k / cls.nx;
    if (ix == 0 || iy == 0 || ix == cls.nx - 1 || iy == cls.ny - 1) return false;
    in[k] = 1;
  }
  std::vector<Label> lab(cls.size(), Label::Plus);
  for (int k = 0; k < cls.size(); ++k) {
    if (in[k]) lab[k] = Label::Minus;
  }
  return fixtures::flood_fill_count(lab, cls.nx, cls.ny, [](Label l) { return l == Label::Plus; }, false) >= 2;
}

Outcome end_to_end() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  SolveConfig cfg;
  cfg.mu = 40;
  cfg.f = Nonlinearity::allen_cahn(0.1);
  cfg.initial_guess = InitialGuess::PatternC;
  const auto sol = newton_galerkin_run(cfg);

  HeuristicErrorInput in;
  in.tau = 0.0;
  in.delta = defect_estimate(sol.field, cfg.f, in.tau);
  in.k_bound = 261.0;
  in.c_embed = 3.7;
  const auto err = heuristic_error(in, cfg.f, sol.field);
  if (!(err.sigma <= kMaxSigma)) o.fail("sigma = " + fmt(err.sigma));

  const auto cls = classify(sol.field, err.sigma, 14);
  auto rep = verify_allen_cahn(cls, err.rho, 0.1);
  rep.certificate_source = "heuristic";
  g_e2e_reports.push_back(rep);
  const double t = seconds_since(t0);

  if (!rep.certified()) o.fail("not certified");
  if (rep.counts.nd.lower != 2 || rep.counts.nd.upper != std::optional<int>(2)) o.fail("nd is not [2, 2]");
  int rings = 0;
  for (const auto& comp : components(cls, Region::ZeroRegion).components) rings += interior_ring(cls, comp);
  if (rings < 1) o.fail("no interior Omega_0 ring");
  if (t >= kMaxEndToEndSeconds) o.fail("took " + fmt(t) + " s");
  if (o.pass) {
    o.detail = "nd [2,2], " + std::to_string(rings) + " interior ring, delta " + fmt(in.delta) + ", rho " +
               fmt(err.rho) + ", sigma " + fmt(err.sigma) + " (heuristic), " + fmt(t) + " s";
  }
  return o;
}

// ---------------------------------------------------------------------------
// 9. Mixed routing

Outcome mixed_routing() {
  Outcome o;
  const auto cls = fixtures::picture(fixtures::kMixed, 8);
  BoundarySpec bc = BoundarySpec::all_dirichlet();
  bc.sides[static_cast<int>(Side::Top)] = BoundarySpec::parse_side("N");

  auto nl = NonlinearityBound::emden(0.0, 3.0);
  const auto rep = verify_mixed(cls, 1e-3, nl, bc, {});
  int case2 = 0;
  for (const auto& c : rep.per_component) case2 += c.boundary_case == 2;
  if (rep.per_component.size() != 3) o.fail("expected 3 components");
  if (case2 != 1) o.fail(std::to_string(case2) + " components in case 2");
  if (!rep.certified()) o.fail("lambda = 0 not certified");

  nl.lambda = 1.0;
  bool refused = false;
  try {
    (void)verify_mixed(cls, 1e-3, nl, bc, {});
  } catch (const MissingUserLambda1&) {
    refused = true;
  }
  if (!refused) o.fail("lambda > 0 without a user lambda_1 was not refused");

  nl.lambda = -1.0;
  if (!verify_mixed(cls, 1e-3, nl, bc, {}).certified()) o.fail("lambda < 0 not certified");
  if (o.pass) o.detail = "3 components, 1 in case 2; refused at lambda = 1; certified at lambda = 0, -1";
  return o;
}

// ---------------------------------------------------------------------------
// 10. Rounding audit

Outcome rounding_audit() {
  Outcome o;
  int checked = 0;
  for (const auto& c : g_replay_checks) {
    checked += 2;
    if (c.lhs.rounding != Rounding::Up || c.rhs.rounding != Rounding::Down) o.fail("replay check mistagged");
  }
  auto audit = [&](const std::vector<NodalReport>& reps, const char* run) {
    if (reps.empty()) o.fail(std::string("run ") + run + " produced no report");
    for (const auto& r : reps) {
      const auto a = audit_rounding(r);
      checked += a.checked;
      if (!a.ok) o.fail(std::string("run ") + run + ": " + a.violations.front());
    }
  };
  audit(g_count_reports, "2");
  audit(g_e2e_reports, "8");
  if (o.pass) o.detail = std::to_string(checked) + " tagged bounds over runs 1, 2, 8";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "condition replay", condition_replay},
      {2, "count-bound replay", count_replay},
      {3, "closed-form constants", closed_forms},
      {4, "volume arithmetic", volume_arithmetic},
      {5, "component oracle", component_oracle},
      {6, "interval soundness", interval_soundness},
      {7, "nesting", nesting},
      {8, "end-to-end run", end_to_end},
      {9, "mixed routing", mixed_routing},
      {10, "rounding audit", rounding_audit},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
