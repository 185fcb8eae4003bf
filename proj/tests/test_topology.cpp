#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "peg/json_io.hpp"
#include "peg/topology.hpp"

using namespace peg;
using oracle::kPi;

namespace {

const SolveReport& pi3_report() {
  static const SolveReport report = [] {
    SolveConfig cfg;
    cfg.grid_per_axis = 16;
    return solve(make_ellipse(2.0, 1.0), RectangleProblem{kPi / 3.0, false}, cfg);
  }();
  return report;
}

// A fabricated one-orbit report for the contradiction paths: keep one orbit
// of the real ellipse report and drop the other.
SolveReport single_orbit_report() {
  SolveReport r = pi3_report();
  r.orbits.resize(1);
  r.raw_solution_count = 2;
  r.signed_total = r.orbits[0].orbit_sign * 2;
  return r;
}

}  // namespace

TEST_CASE("orientation sign agrees with the residual jacobian determinant") {
  // Two independent routes to the same sign: the tangent-frame determinant
  // and the residual Jacobian determinant (equal up to a positive factor).
  const FourierCurve e = make_ellipse(2.0, 1.0);
  const Problem problem = RectangleProblem{kPi / 3.0, false};
  for (const PegOrbit& orbit : pi3_report().orbits)
    for (const Solution& s : orbit.members) {
      const int sign = orientation_sign(e, problem, s.quadruple);
      const double det = jacobian(e, problem, s.quadruple).determinant();
      CHECK(sign == (det > 0 ? 1 : -1));
    }
}

TEST_CASE("tau partners carry equal signs, the two orbits opposite ones") {
  const FourierCurve e = make_ellipse(2.0, 1.0);
  const Problem problem = RectangleProblem{kPi / 3.0, false};
  const SolveReport& report = pi3_report();
  REQUIRE(report.orbits.size() == 2);
  for (const PegOrbit& orbit : report.orbits) {
    REQUIRE(orbit.members.size() == 2);
    const int s0 = orientation_sign(e, problem, orbit.members[0].quadruple);
    const int s1 = orientation_sign(e, problem, orbit.members[1].quadruple);
    CHECK(s0 == s1);
    CHECK(s0 == orbit.orbit_sign);
  }
  CHECK(report.orbits[0].orbit_sign == -report.orbits[1].orbit_sign);
  CHECK(signed_total(report) == 0);
}

TEST_CASE("parameter-order reversal identities") {
  // reversing the parameter order of one torus flips the sign; reversing
  // both (tau at the matrix level) preserves it
  const FourierCurve e = make_ellipse(2.0, 1.0);
  const Problem problem = RectangleProblem{kPi / 3.0, false};
  for (const PegOrbit& orbit : pi3_report().orbits)
    for (const Solution& s : orbit.members) {
      const Eigen::Matrix4d J = jacobian(e, problem, s.quadruple);
      Eigen::Matrix4d first = J, both = J;
      first.col(0).swap(first.col(1));
      both.col(0).swap(both.col(1));
      both.col(2).swap(both.col(3));
      CHECK(first.determinant() * J.determinant() < 0);
      CHECK(both.determinant() * J.determinant() > 0);
    }
}

TEST_CASE("orientation sign refuses degenerate points") {
  const FourierCurve circ = make_ellipse(1.0, 1.0);
  const double phi = kPi / 4.0;
  // a point of the circle's solution family
  const TorusQuadruple q = TorusQuadruple::wrapped(1.0 + phi, 1.0 + phi + kPi, 1.0, 1.0 + kPi);
  REQUIRE(residual_rect(circ, phi, q).norm < 1e-12);
  const Problem problem = RectangleProblem{phi, false};
  CHECK_THROWS_AS(orientation_sign(circ, problem, q), LedgerError);
}

TEST_CASE("clean formula ledger balances on ellipse reports") {
  const CleanFormulaVerdict v = clean_formula_check(pi3_report());
  CHECK(v.balanced);
  CHECK(v.total == 0);
  CHECK_FALSE(v.empty_warning);

  // one circle item that does not count, plus one item per orbit
  std::size_t counting = 0;
  int sum = 0;
  for (const LedgerItem& item : v.items)
    if (item.counts) {
      ++counting;
      sum += item.contribution;
    }
  CHECK(counting == pi3_report().orbits.size());
  CHECK(sum == 0);
  CHECK(v.items.size() == counting + 1);
}

TEST_CASE("clean formula flags an unbalanced ledger") {
  CHECK_THROWS_AS(clean_formula_check(single_orbit_report()), LedgerError);
}

TEST_CASE("clean formula on an empty rectangle report warns") {
  SolveReport r = pi3_report();
  r.orbits.clear();
  r.raw_solution_count = 0;
  r.signed_total = 0;
  r.empty_result_warning = true;
  const CleanFormulaVerdict v = clean_formula_check(r);
  CHECK(v.balanced);
  CHECK(v.empty_warning);
}

TEST_CASE("euler bookkeeping on the ellipse") {
  const EulerLedger ledger = euler_bookkeeping(pi3_report());
  CHECK(ledger.chi == 0);
  CHECK_FALSE(ledger.contradiction);
  REQUIRE(ledger.doubling_certificate.has_value());
  CHECK(*ledger.doubling_certificate);

  // two circle generators (parities 0 and 1) plus one per raw solution
  CHECK(ledger.generators.size() == 2 + pi3_report().raw_solution_count);
  int circle_parity_sum = 0, circle_count = 0;
  for (const GradedGenerator& g : ledger.generators)
    if (g.origin == GradedGenerator::Origin::CircleMorsePoint) {
      ++circle_count;
      circle_parity_sum += g.parity;
    }
  CHECK(circle_count == 2);
  CHECK(circle_parity_sum == 1);
}

TEST_CASE("euler bookkeeping flags a single-orbit report") {
  const EulerLedger ledger = euler_bookkeeping(single_orbit_report());
  CHECK(std::abs(ledger.chi) == 2);
  CHECK(ledger.contradiction);
  REQUIRE(ledger.doubling_certificate.has_value());
  CHECK_FALSE(*ledger.doubling_certificate);

  // chi is covariant in the global sign
  const EulerLedger flipped = euler_bookkeeping(single_orbit_report(), -1);
  CHECK(flipped.chi == -ledger.chi);
}

TEST_CASE("euler bookkeeping with no orbits") {
  SolveReport r = pi3_report();
  r.orbits.clear();
  r.raw_solution_count = 0;
  r.signed_total = 0;
  const EulerLedger ledger = euler_bookkeeping(r);
  CHECK(ledger.chi == 0);
  CHECK_FALSE(ledger.contradiction);
  CHECK_FALSE(ledger.doubling_certificate.has_value());
}

TEST_CASE("chi equals signed total under the global sign") {
  const SolveReport& r = pi3_report();
  for (int gs : {1, -1}) {
    const EulerLedger ledger = euler_bookkeeping(r, gs);
    CHECK(ledger.chi == gs * signed_total(r));
  }
}

TEST_CASE("topology JSON block") {
  const CleanFormulaVerdict clean = clean_formula_check(pi3_report());
  const EulerLedger euler = euler_bookkeeping(pi3_report());
  const Json j = topology_to_json(clean, euler);
  CHECK(j.at("signed_total").get<int>() == 0);
  CHECK(j.at("euler_chi").get<int>() == 0);
  CHECK(j.at("doubling_certificate").get<bool>());
  CHECK(j.at("ledger").is_array());
  CHECK_FALSE(j.at("contradiction").get<bool>());
}

TEST_CASE("diagonal perturbation: two zeros of opposite sign") {
  SolveConfig cfg;
  cfg.grid_per_axis = 16;
  const FourierCurve e = make_ellipse(2.0, 1.0);
  const Problem problem = RectangleProblem{kPi / 3.0, false};

  const DiagonalPerturbVerdict v =
      perturb_diagonal_count(e, problem, 1e-3, cfg, &pi3_report());
  CHECK(v.pass);
  REQUIRE(v.zeros.size() == 2);
  CHECK(v.zeros[0].sign + v.zeros[1].sign == 0);
  CHECK(v.near_diagonal_signed == 0);
  REQUIRE(v.combined_total.has_value());
  CHECK(*v.combined_total == 0);
  for (const DiagonalZero& z : v.zeros)
    CHECK(z.diagonal_distance < cfg.diag_exclusion);
}

TEST_CASE("diagonal perturbation with epsilon zero finds nothing") {
  SolveConfig cfg;
  cfg.grid_per_axis = 16;
  const FourierCurve e = make_ellipse(2.0, 1.0);
  const Problem problem = RectangleProblem{kPi / 3.0, false};
  const DiagonalPerturbVerdict v = perturb_diagonal_count(e, problem, 0.0, cfg, nullptr);
  CHECK(v.zeros.empty());
  CHECK(v.pass);
}
