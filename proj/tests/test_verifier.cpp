#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"
#include "nodalcert/errors.hpp"
#include "nodalcert/verifier.hpp"

using nodalcert::BoundarySpec;
using nodalcert::CellClassification;
using nodalcert::Label;
using nodalcert::NodalReport;
using nodalcert::NonlinearityBound;
using nodalcert::Rectangle;
using nodalcert::Verdict;
using fixtures::kMixed;
using fixtures::kTypeA;
using fixtures::kTypeB;
using fixtures::kTypeC;

namespace {

const double kPi = 3.14159265358979323846;
const double kInf = std::numeric_limits<double>::infinity();

void check_counts(const nodalcert::NdBounds& b, int plo, int phi, int nlo, int nhi) {
  CHECK(b.pnd.lower == plo);
  REQUIRE(b.pnd.upper.has_value());
  CHECK(*b.pnd.upper == phi);
  CHECK(b.nnd.lower == nlo);
  REQUIRE(b.nnd.upper.has_value());
  CHECK(*b.nnd.upper == nhi);
  CHECK(b.nd.lower == plo + nlo);
  CHECK(*b.nd.upper == phi + nhi);
}

// Sign regions of point samples at the centers of an n x n grid, counted by
// breadth-first flood fill with edge adjacency.
std::pair<int, int> sampled_counts(const nodalcert::CoefficientField& f, int n) {
  std::vector<int> sign(n * n);
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const double v = nodalcert::point_eval(f, (ix + 0.5) / n, (iy + 0.5) / n);
      sign[iy * n + ix] = v > 0 ? 1 : (v < 0 ? -1 : 0);
    }
  }
  std::vector<char> seen(n * n, 0);
  int pos = 0, neg = 0;
  for (int s = 0; s < n * n; ++s) {
    if (seen[s] || sign[s] == 0) continue;
    (sign[s] > 0 ? pos : neg)++;
    std::queue<int> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      const int c = q.front();
      q.pop();
      const int cx = c % n, cy = c / n;
      const int nb[4][2] = {{cx - 1, cy}, {cx + 1, cy}, {cx, cy - 1}, {cx, cy + 1}};
      for (const auto& p : nb) {
        if (p[0] < 0 || p[0] >= n || p[1] < 0 || p[1] >= n) continue;
        const int k = p[1] * n + p[0];
        if (!seen[k] && sign[k] == sign[s]) {
          seen[k] = 1;
          q.push(k);
        }
      }
    }
  }
  return {pos, neg};
}

BoundarySpec top_neumann() {
  BoundarySpec bc = BoundarySpec::all_dirichlet();
  bc.sides[static_cast<int>(nodalcert::Side::Top)] = BoundarySpec::parse_side("N");
  return bc;
}

}  // namespace

TEST_CASE("smallness condition") {
  const auto cubic0 = NonlinearityBound::emden(0.0, 3.0);
  auto a = nodalcert::check_smallness(cubic0, 10.0, {0.3}, {1.0});
  CHECK(a.holds);
  CHECK(a.lhs.value >= 0.09);
  CHECK(a.lhs.value == doctest::Approx(0.09).epsilon(1e-15));
  CHECK(a.rhs.value == 1.0);
  CHECK(a.lhs.rounding == nodalcert::Rounding::Up);
  CHECK(a.rhs.rounding == nodalcert::Rounding::Down);

  auto lam = NonlinearityBound::emden(5.0, 3.0);
  auto z = nodalcert::check_smallness(lam, 10.0, {0.3}, {0.0});
  CHECK(z.lhs.value == 0.0);
  CHECK(z.holds);
  CHECK(z.rhs.value <= 0.5);
  CHECK(z.rhs.value == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_FALSE(nodalcert::check_smallness(lam, 4.0, {0.3}, {0.0}).holds);

  auto eq = nodalcert::check_smallness(lam, 5.0, {0.3}, {0.0});
  CHECK_FALSE(eq.holds);
  CHECK(eq.rhs.value <= 0.0);

  // Equality after rounding is not enough.
  auto tight = nodalcert::check_smallness(cubic0, kInf, {1.0}, {1.0});
  CHECK(tight.lhs.value == 1.0);
  CHECK_FALSE(tight.holds);

  // lambda <= 0 needs no eigenvalue bound.
  CHECK(nodalcert::check_smallness(NonlinearityBound::emden(-3.0, 3.0), 0.0, {0.1}, {0.1}).holds);
  CHECK_THROWS_AS(nodalcert::check_smallness(cubic0, 1.0, {}, {}), nodalcert::DomainError);
}

TEST_CASE("nonlinearity bounds") {
  CHECK_THROWS_AS(NonlinearityBound::emden(0.0, 1.0), nodalcert::DomainError);
  CHECK_THROWS_AS(NonlinearityBound::emden(0.0, kInf), nodalcert::DomainError);
  CHECK_THROWS_AS(NonlinearityBound::emden(0.0, 5.0, 3), nodalcert::DomainError);
  CHECK_NOTHROW(NonlinearityBound::emden(0.0, 4.9, 3));
  CHECK(NonlinearityBound::emden(0.0, 2.0, 4).p_star() == 3.0);
  NonlinearityBound bad;
  bad.terms = {{-1.0, 2.0}};
  CHECK_THROWS_AS(bad.validate(), nodalcert::DomainError);
  const auto ac = NonlinearityBound::allen_cahn(0.1);
  CHECK(ac.lambda >= 100.0);
  CHECK(ac.lambda == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(ac.terms.empty());
  CHECK_THROWS_AS(NonlinearityBound::allen_cahn(0.0), nodalcert::DomainError);
}

TEST_CASE("count bounds for the three solution types") {
  check_counts(nodalcert::nd_bounds(fixtures::picture(kTypeA, 8)), 1, 1, 1, 2);
  check_counts(nodalcert::nd_bounds(fixtures::picture(kTypeB, 8)), 1, 2, 1, 2);
  check_counts(nodalcert::nd_bounds(fixtures::picture(kTypeC, 8)), 1, 1, 1, 1);
  const auto unc = nodalcert::nd_bounds(fixtures::picture(kTypeB, 8), false);
  CHECK(unc.pnd.lower == 1);
  CHECK_FALSE(unc.pnd.upper.has_value());
  CHECK_FALSE(unc.nd.upper.has_value());
}

TEST_CASE("Allen-Cahn certification on the three types") {
  for (const auto* pic : {&kTypeA, &kTypeB, &kTypeC}) {
    const auto cls = fixtures::picture(*pic, 8);
    // Coarse pictures have large Omega_0, so eps^-2 = 25 here.
    const auto rep = nodalcert::verify_allen_cahn(cls, 1e-3, 0.2);
    CHECK(rep.certified());
    CHECK(rep.theorem_used == nodalcert::Theorem::AllenCahn);
    for (const auto& c : rep.per_component) {
      CHECK(c.lambda1.value > 25.0);
      CHECK(c.lhs.value == 0.0);
    }
    CHECK(nodalcert::audit_rounding(rep).ok);
  }
  const auto rc = nodalcert::verify_allen_cahn(fixtures::picture(kTypeC, 8), 1e-3, 0.2);
  REQUIRE(rc.per_component.size() == 1);
  // 30 cells of area 1/256 each.
  CHECK(rc.per_component[0].cells == 30);
  CHECK(rc.per_component[0].lambda1.value == doctest::Approx(2 * kPi * 256 / 30).epsilon(1e-12));
  CHECK(*rc.counts.nd.upper == 2);
  CHECK(rc.counts.nd.lower == 2);
  // A tiny eps makes eps^-2 exceed every bound.
  const auto bad = nodalcert::verify_allen_cahn(fixtures::picture(kTypeC, 8), 1e-3, 0.01);
  CHECK(bad.verdict == Verdict::NotCertified);
  CHECK(bad.failing_component == 0);
  CHECK_FALSE(bad.counts.nd.upper.has_value());
}

TEST_CASE("Allen-Cahn: component of volume 0.07 fails at eps^-2 = 100") {
  const auto cls = fixtures::picture({"0+", "++"}, 2, Rectangle{0.0, 0.7, 0.0, 0.4});
  const auto rep = nodalcert::verify_allen_cahn(cls, 0.0, 0.1);
  REQUIRE(rep.per_component.size() == 1);
  CHECK(rep.per_component[0].volume.value == doctest::Approx(0.07).epsilon(1e-14));
  CHECK(rep.per_component[0].lambda1.value == doctest::Approx(2 * kPi / 0.07).epsilon(1e-12));
  CHECK(rep.per_component[0].lambda1.value < 100.0);
  CHECK(rep.verdict == Verdict::NotCertified);
}

TEST_CASE("empty Omega_0 is certified") {
  const auto cls = nodalcert::classify(fixtures::ConstantModel(1.0), Rectangle::unit(), 0.5, 6);
  const auto rep = nodalcert::verify_dirichlet(cls, 0.3, NonlinearityBound::emden(0.0, 3.0));
  CHECK(rep.certified());
  CHECK(rep.per_component.empty());
  check_counts(rep.counts, 1, 1, 0, 0);
  const auto li = nodalcert::verify_linf_only(cls, NonlinearityBound::emden(0.0, 3.0));
  CHECK(li.certified());
  check_counts(li.counts, 1, 1, 0, 0);
}

TEST_CASE("two-lobe field with cubic nonlinearity") {
  const auto f = fixtures::sine_field(2, 1, 12);
  const auto truth = sampled_counts(f, 256);
  CHECK(truth.first == 1);
  CHECK(truth.second == 1);
  const auto rep = nodalcert::verify_emden(f, 1e-4, 1e-3, 0.0, 3.0, 10);
  CHECK(rep.certified());
  check_counts(rep.counts, 1, 1, 1, 1);
  CHECK(rep.theorem_used == nodalcert::Theorem::Emden);
  REQUIRE(rep.per_component.size() == 1);
  CHECK(rep.per_component[0].lhs.value < 0.01);
  CHECK(nodalcert::audit_rounding(rep).ok);

  // Same as the generic form with a one-term bound.
  const auto gen = nodalcert::verify_dirichlet(f, 1e-4, 1e-3, NonlinearityBound::emden(0.0, 3.0), 10);
  CHECK(gen.per_component[0].lhs.value == rep.per_component[0].lhs.value);
  CHECK(gen.per_component[0].rhs.value == rep.per_component[0].rhs.value);

  // sigma beyond max |u_hat|: Omega_0 is everything.
  const auto all = nodalcert::verify_emden(f, 1e-4, 2.0, 0.0, 3.0, 8);
  CHECK(all.verdict == Verdict::AssumptionViolation);
  CHECK_FALSE(all.counts.nd.upper.has_value());
  CHECK_THROWS_AS(nodalcert::verify_emden(f, 1e-4, 1e-3, 0.0, 1.0, 8), nodalcert::DomainError);
}

TEST_CASE("L^inf-only form agrees with rho = 0") {
  const auto f = fixtures::sine_field(3, 1, 12);
  const auto cls = nodalcert::classify(f, 0.0, 10);
  NonlinearityBound nl;
  nl.lambda = 2.0;
  nl.terms = {{1.0, 3.0}, {0.5, 2.0}};
  const auto a = nodalcert::verify_linf_only(cls, nl);
  const auto b = nodalcert::verify_dirichlet(cls, 0.0, nl);
  REQUIRE(a.per_component.size() == b.per_component.size());
  REQUIRE(!a.per_component.empty());
  for (std::size_t j = 0; j < a.per_component.size(); ++j) {
    CHECK(a.per_component[j].lhs.value == b.per_component[j].lhs.value);
    CHECK(a.per_component[j].rhs.value == b.per_component[j].rhs.value);
  }
  CHECK(a.certified() == b.certified());
  CHECK(a.certified());
  // u_hat vanishes on the boundary, so boundary cells are undetermined and
  // join the two positive lobes in Omega_+ u Omega_0.
  check_counts(a.counts, 1, 2, 1, 1);
  const auto truth = sampled_counts(f, 256);
  CHECK(truth.first == 2);
  CHECK(truth.second == 1);
}

TEST_CASE("L^inf inflation term") {
  // One cell of area 0.01 with u_hat = 0 on it.
  auto cls = fixtures::picture({"0+", "++"}, 2, Rectangle{0.0, 0.1, 0.0, 0.4}, 1e-6);
  cls.ranges[cls.index(0, 1)] = nodalcert::Interval(0.0);
  const auto rep = nodalcert::verify_linf_only(cls, NonlinearityBound::emden(0.0, 3.0));
  REQUIRE(rep.per_component.size() == 1);
  const double expect = 1e-6 * std::pow(1e-2, 0.25);
  CHECK(rep.per_component[0].norm[0].value >= expect);
  CHECK(rep.per_component[0].norm[0].value == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("validity range of the nonlinearity bound is enforced") {
  const auto f = fixtures::sine_field(2, 1, 12);
  auto nl = NonlinearityBound::emden(0.0, 3.0);
  nl.range = std::make_pair(-0.5, 0.5);
  CHECK_THROWS_AS(nodalcert::verify_dirichlet(f, 1e-4, 1e-3, nl, 8), nodalcert::RangeViolation);
  nl.range = std::make_pair(-2.0, 2.0);
  CHECK(nodalcert::verify_dirichlet(f, 1e-4, 1e-3, nl, 8).certified());
}

TEST_CASE("inflating sigma never shrinks Omega_0") {
  for (int kx = 1; kx <= 3; ++kx) {
    const auto f = fixtures::sine_field(kx, 1, 10);
    const auto truth = sampled_counts(f, 128);
    std::optional<CellClassification> prev;
    std::optional<nodalcert::NdBounds> prev_b;
    for (double sigma : {1e-4, 1e-3, 1e-2, 5e-2}) {
      const auto cls = nodalcert::classify(f, sigma, 10);
      const auto rep = nodalcert::verify_emden(cls, 1e-5, 0.0, 3.0);
      if (prev) {
        for (int i = 0; i < cls.size(); ++i) {
          if (prev->labels[i] == Label::Undetermined) REQUIRE(cls.labels[i] == Label::Undetermined);
        }
      }
      REQUIRE(rep.certified());
      const auto& b = rep.counts;
      CHECK(b.pnd.lower <= truth.first);
      CHECK(truth.first <= *b.pnd.upper);
      CHECK(b.nnd.lower <= truth.second);
      CHECK(truth.second <= *b.nnd.upper);
      if (prev_b) {
        CHECK(b.nd.lower <= prev_b->nd.lower);
        CHECK(*b.nd.upper >= *prev_b->nd.upper);
      }
      prev = cls;
      prev_b = b;
    }
  }
}

TEST_CASE("mixed boundary routing") {
  const auto cls = fixtures::picture(kMixed, 8);
  const auto bc = top_neumann();
  NonlinearityBound nl = NonlinearityBound::emden(0.0, 3.0);

  const auto rep = nodalcert::verify_mixed(cls, 1e-3, nl, bc, {});
  REQUIRE(rep.per_component.size() == 3);
  int case2 = 0;
  for (const auto& c : rep.per_component) {
    if (c.boundary_case == 2) {
      ++case2;
      CHECK(c.touches_neumann);
      CHECK(c.cells == 12);
      CHECK(c.embedding_method[0] == "mizuguchi");
      CHECK(c.rhs.value == 1.0);
    } else {
      CHECK(c.boundary_case == 1);
    }
  }
  CHECK(case2 == 1);
  CHECK(rep.certified());
  CHECK(nodalcert::audit_rounding(rep).ok);

  // lambda > 0 needs a user eigenvalue bound for the case-2 component.
  nl.lambda = 1.0;
  CHECK_THROWS_AS(nodalcert::verify_mixed(cls, 1e-3, nl, bc, {}), nodalcert::MissingUserLambda1);
  int id2 = -1;
  for (const auto& c : rep.per_component) {
    if (c.boundary_case == 2) id2 = c.id;
  }
  const auto with = nodalcert::verify_mixed(cls, 1e-3, nl, bc, {{id2, 50.0}});
  CHECK(with.certified());
  CHECK(with.per_component[id2].lambda1_method == "user");
  CHECK(with.per_component[id2].rhs.value == doctest::Approx(0.98).epsilon(1e-14));
  const auto low = nodalcert::verify_mixed(cls, 1e-3, nl, bc, {{id2, 0.5}});
  CHECK(low.verdict == Verdict::NotCertified);
  CHECK(low.failing_component == id2);

  nl.lambda = -2.0;
  CHECK(nodalcert::verify_mixed(cls, 1e-3, nl, bc, {}).certified());
}

TEST_CASE("mixed with all-Dirichlet data equals the Dirichlet form") {
  const auto cls = fixtures::picture(kMixed, 8);
  const auto nl = NonlinearityBound::emden(1.0, 3.0);
  const auto a = nodalcert::verify_mixed(cls, 1e-3, nl, BoundarySpec::all_dirichlet(), {});
  const auto b = nodalcert::verify_dirichlet(cls, 1e-3, nl);
  REQUIRE(a.per_component.size() == b.per_component.size());
  for (std::size_t j = 0; j < a.per_component.size(); ++j) {
    CHECK(a.per_component[j].boundary_case == 1);
    CHECK(a.per_component[j].lhs.value == b.per_component[j].lhs.value);
    CHECK(a.per_component[j].rhs.value == b.per_component[j].rhs.value);
  }
  CHECK(a.verdict == b.verdict);
  CHECK(a.counts.nd.lower == b.counts.nd.lower);
  CHECK(a.counts.nd.upper == b.counts.nd.upper);
}

TEST_CASE("rounding audit catches a mistagged bound") {
  auto rep = nodalcert::verify_allen_cahn(fixtures::picture(kTypeA, 8), 0.0, 0.2);
  auto audit = nodalcert::audit_rounding(rep);
  CHECK(audit.ok);
  CHECK(audit.checked > 5);
  rep.per_component[0].rhs.rounding = nodalcert::Rounding::Up;
  audit = nodalcert::audit_rounding(rep);
  CHECK_FALSE(audit.ok);
  CHECK(audit.violations.size() == 1);
}

TEST_CASE("report JSON") {
  const auto rep = nodalcert::verify_emden(fixtures::sine_field(2, 1, 12), 1e-4, 1e-3, 0.0, 3.0, 8);
  const auto j = nlohmann::json::parse(nodalcert::to_json(rep));
  CHECK(j["verdict"] == "certified");
  CHECK(j["theorem_used"] == "emden");
  CHECK(j["nd"]["lower"] == 2);
  CHECK(j["nd"]["upper"] == 2);
  CHECK(j["inputs"]["rho"] == 1e-4);
  CHECK(j["per_component"][0]["lhs"]["rounding"] == "up");
  CHECK(j["per_component"][0]["rhs"]["rounding"] == "down");
  CHECK(j["per_component"][0]["lhs"]["value"].get<double>() == rep.per_component[0].lhs.value);

  const auto bad = nodalcert::verify_emden(fixtures::sine_field(2, 1, 12), 1e-4, 2.0, 0.0, 3.0, 6);
  const auto jb = nlohmann::json::parse(nodalcert::to_json(bad));
  CHECK(jb["nd"]["upper"] == "unbounded");
  CHECK(jb["certified"] == false);
}
