#include "peg/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SVD>

namespace peg {

namespace {

Eigen::Matrix4d tangent_matrix(const FourierCurve& curve, const Problem& problem,
                               const TorusQuadruple& q) {
  const Complex d1 = curve.deriv(q[0], 1), d2 = curve.deriv(q[1], 1);
  const Complex d3 = curve.deriv(q[2], 1), d4 = curve.deriv(q[3], 1);
  std::array<std::pair<Complex, Complex>, 4> cols;
  if (const auto* rect = std::get_if<RectangleProblem>(&problem)) {
    const Complex rot = std::polar(1.0, rect->angle());
    cols = {{
        {d1 / 2.0, d1 / 2.0},          // d/dt1 of point_L
        {d2 / 2.0, -d2 / 2.0},         // d/dt2 of point_L
        {d3 / 2.0, rot * d3 / 2.0},    // d/dt3 of point_Lphi
        {d4 / 2.0, -rot * d4 / 2.0},   // d/dt4 of point_Lphi
    }};
  } else {
    const QuadData& d = std::get<QuadProblem>(problem).data;
    const Complex rot = std::polar(1.0, d.phi);
    const double ws = std::sqrt(d.s * (1.0 - d.s));
    const double wt = std::sqrt(d.t * (1.0 - d.t));
    cols = {{
        {(1.0 - d.s) * d1, ws * rot * d1},  // d/dt1 of point_T1
        {d.s * d2, -ws * rot * d2},         // d/dt2 of point_T1
        {(1.0 - d.t) * d3, wt * d3},        // d/dt3 of point_T2
        {d.t * d4, -wt * d4},               // d/dt4 of point_T2
    }};
  }
  Eigen::Matrix4d m;
  for (int i = 0; i < 4; ++i) {
    m(0, i) = cols[static_cast<std::size_t>(i)].first.real();
    m(1, i) = cols[static_cast<std::size_t>(i)].first.imag();
    m(2, i) = cols[static_cast<std::size_t>(i)].second.real();
    m(3, i) = cols[static_cast<std::size_t>(i)].second.imag();
  }
  return m;
}

// Foot of the perpendicular from q to the small diagonal: the circle angle
// minimizing the torus distance, together with that distance.
std::pair<double, double> diagonal_foot(const TorusQuadruple& q) {
  double best_d = std::numeric_limits<double>::infinity();
  double best_theta = 0.0;
  for (int j = 0; j < 4; ++j) {
    const double ref = q[j];
    double mean = 0.0;
    for (int i = 0; i < 4; ++i) {
      double x = q[i];
      while (x - ref > kTwoPi / 2.0) x -= kTwoPi;
      while (ref - x > kTwoPi / 2.0) x += kTwoPi;
      mean += x;
    }
    mean /= 4.0;
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double d = circle_distance(q[i], mean);
      s += d * d;
    }
    const double dist = std::sqrt(s);
    if (dist < best_d) {
      best_d = dist;
      best_theta = wrap_angle(mean);
    }
  }
  return {best_theta, best_d};
}

double smooth_bump(double d, double delta) {
  const double x = d / delta;
  if (x >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - x * x));
}

}  // namespace

int orientation_sign(const FourierCurve& curve, const Problem& problem,
                     const TorusQuadruple& q) {
  const Eigen::Matrix4d m = tangent_matrix(curve, problem, q);
  double scale = 1.0;
  for (int i = 0; i < 4; ++i) scale *= m.col(i).norm();
  const double det = m.determinant();
  if (std::fabs(det) < 1e-12 * scale)
    throw LedgerError("orientation_sign: degenerate intersection, refusing to sign");
  return det > 0.0 ? 1 : -1;
}

int signed_total(const SolveReport& report) {
  if (report.degenerate_family.found)
    throw LedgerError("signed_total: report contains a degenerate family");
  int total = 0;
  for (const PegOrbit& orbit : report.orbits)
    for (const Solution& m : orbit.members) {
      if (!m.sign || !m.transverse)
        throw LedgerError("signed_total: unsigned or non-transverse solution present");
      total += *m.sign;
    }
  return total;
}

CleanFormulaVerdict clean_formula_check(const SolveReport& report) {
  const int off_diagonal = signed_total(report);

  CleanFormulaVerdict verdict;
  verdict.items.push_back({"clean circle gamma x {0}: sign x chi(S^1) = sign x 0", 0, false});
  for (std::size_t i = 0; i < report.orbits.size(); ++i) {
    const PegOrbit& orbit = report.orbits[i];
    int contribution = 0;
    for (const Solution& m : orbit.members) contribution += m.sign.value_or(0);
    std::ostringstream label;
    label << "orbit " << i << " (" << orbit.members.size() << " members)";
    verdict.items.push_back({label.str(), contribution, true});
  }
  verdict.total = off_diagonal;
  verdict.balanced = (verdict.total == 0);
  verdict.empty_warning =
      report.orbits.empty() && std::holds_alternative<RectangleProblem>(report.problem);
  if (!verdict.balanced)
    throw LedgerError("clean_formula_check: ledger does not balance (missed solution or sign bug)");
  return verdict;
}

EulerLedger euler_bookkeeping(const SolveReport& report, int global_sign) {
  if (global_sign != 1 && global_sign != -1)
    throw std::invalid_argument("euler_bookkeeping: global_sign must be +1 or -1");
  if (report.degenerate_family.found)
    throw LedgerError("euler_bookkeeping: report contains a degenerate family");

  EulerLedger ledger;
  ledger.global_sign = global_sign;
  // The clean circle contributes one generator per parity (perfect Morse
  // function on S^1).
  ledger.generators.push_back({"x (circle Morse index 1)", 1,
                               GradedGenerator::Origin::CircleMorsePoint});
  ledger.generators.push_back({"y (circle Morse index 0)", 0,
                               GradedGenerator::Origin::CircleMorsePoint});

  int declared_total = 0;
  for (std::size_t i = 0; i < report.orbits.size(); ++i) {
    const PegOrbit& orbit = report.orbits[i];
    std::optional<int> orbit_parity;
    for (std::size_t k = 0; k < orbit.members.size(); ++k) {
      const Solution& m = orbit.members[k];
      if (!m.sign || !m.transverse)
        throw LedgerError("euler_bookkeeping: unsigned or non-transverse solution present");
      // Categorification rule: (-1)^parity = global_sign * sign.
      const int parity = (global_sign * *m.sign == 1) ? 0 : 1;
      // tau-paired members share a sign, hence a parity; C4 orbits mix both.
      if (orbit.members.size() <= 2) {
        if (orbit_parity && *orbit_parity != parity)
          throw LedgerError("euler_bookkeeping: parity assignment inconsistent within an orbit");
        orbit_parity = parity;
      }
      std::ostringstream label;
      label << "p[" << i << "." << k << "]";
      ledger.generators.push_back({label.str(), parity,
                                   GradedGenerator::Origin::TransversePairMember});
      declared_total += *m.sign;
    }
  }

  for (const GradedGenerator& g : ledger.generators)
    ledger.chi += (g.parity == 0) ? 1 : -1;
  if (ledger.chi != global_sign * declared_total)
    throw LedgerError("euler_bookkeeping: chi disagrees with the signed total");
  ledger.contradiction = (ledger.chi != 0);

  if (report.orbits.empty()) {
    ledger.doubling_certificate = std::nullopt;
  } else if (ledger.contradiction) {
    ledger.doubling_certificate = false;
  } else {
    bool plus = false, minus = false;
    for (const PegOrbit& orbit : report.orbits) {
      for (const Solution& m : orbit.members) {
        if (*m.sign > 0) plus = true;
        if (*m.sign < 0) minus = true;
      }
    }
    ledger.doubling_certificate = plus && minus && report.orbits.size() >= 2;
  }
  return ledger;
}

DiagonalPerturbVerdict perturb_diagonal_count(const FourierCurve& curve, const Problem& problem,
                                              double epsilon, const SolveConfig& config,
                                              const SolveReport* report) {
  validate(problem);
  config.validate();
  if (!(epsilon >= 0.0)) throw std::invalid_argument("perturb_diagonal_count: epsilon < 0");
  const double delta = config.diag_exclusion;

  // Cokernel and column-space unit fields of the residual Jacobian along the
  // diagonal circle, sign-propagated for continuity and linearly
  // interpolated in between.
  constexpr int kField = 256;
  std::vector<Eigen::Vector4d> w_field(kField), v_field(kField);
  for (int i = 0; i < kField; ++i) {
    const double theta = kTwoPi * i / kField;
    const TorusQuadruple d = TorusQuadruple::wrapped(theta, theta, theta, theta);
    Eigen::JacobiSVD<Eigen::Matrix4d> svd(jacobian(curve, problem, d), Eigen::ComputeFullU);
    w_field[static_cast<std::size_t>(i)] = svd.matrixU().col(3);
    v_field[static_cast<std::size_t>(i)] = svd.matrixU().col(0);
    if (i > 0) {
      if (w_field[static_cast<std::size_t>(i)].dot(w_field[static_cast<std::size_t>(i - 1)]) < 0.0)
        w_field[static_cast<std::size_t>(i)] = -w_field[static_cast<std::size_t>(i)];
      if (v_field[static_cast<std::size_t>(i)].dot(v_field[static_cast<std::size_t>(i - 1)]) < 0.0)
        v_field[static_cast<std::size_t>(i)] = -v_field[static_cast<std::size_t>(i)];
    }
  }
  auto field_at = [&](double theta, const std::vector<Eigen::Vector4d>& field) {
    const double x = wrap_angle(theta) / kTwoPi * kField;
    const int i0 = static_cast<int>(std::floor(x)) % kField;
    const int i1 = (i0 + 1) % kField;
    const double f = x - std::floor(x);
    Eigen::Vector4d a = field[static_cast<std::size_t>(i0)];
    Eigen::Vector4d b = field[static_cast<std::size_t>(i1)];
    if (a.dot(b) < 0.0) b = -b;  // seam between sign branches
    Eigen::Vector4d r = (1.0 - f) * a + f * b;
    const double n = r.norm();
    return n > 0.0 ? Eigen::Vector4d(r / n) : a;
  };

  auto perturbed = [&](const TorusQuadruple& q) -> Eigen::Vector4d {
    const ResidualValue r = residual(curve, problem, q);
    Eigen::Vector4d g(r.components[0], r.components[1], r.components[2], r.components[3]);
    const auto [theta, d] = diagonal_foot(q);
    const double beta = smooth_bump(d, delta);
    if (beta > 0.0 && epsilon > 0.0) {
      // Height function cos(theta) on the diagonal circle: its derivative
      // -sin(theta) weights the cokernel direction, leaving zeros only at
      // the two critical points.
      const Eigen::Vector4d n =
          -std::sin(theta) * field_at(theta, w_field) + std::cos(theta) * field_at(theta, v_field);
      g += epsilon * beta * n;
    }
    return g;
  };

  auto fd_jacobian = [&](const TorusQuadruple& q) {
    constexpr double h = 1e-6;
    Eigen::Matrix4d j;
    for (int i = 0; i < 4; ++i) {
      TorusQuadruple qp = q, qm = q;
      qp.t[static_cast<std::size_t>(i)] = wrap_angle(qp[i] + h);
      qm.t[static_cast<std::size_t>(i)] = wrap_angle(qm[i] - h);
      j.col(i) = (perturbed(qp) - perturbed(qm)) / (2.0 * h);
    }
    return j;
  };

  auto newton = [&](TorusQuadruple q) -> std::optional<TorusQuadruple> {
    for (int iter = 0; iter < 60; ++iter) {
      const Eigen::Vector4d g = perturbed(q);
      const double base = g.norm();
      if (base <= 1e-12) return q;
      const Eigen::Vector4d step = fd_jacobian(q).completeOrthogonalDecomposition().solve(-g);
      if (!step.allFinite()) return std::nullopt;
      double alpha = 1.0;
      bool improved = false;
      TorusQuadruple next = q;
      for (int h = 0; h < 20; ++h) {
        next = TorusQuadruple::wrapped(q[0] + alpha * step(0), q[1] + alpha * step(1),
                                       q[2] + alpha * step(2), q[3] + alpha * step(3));
        if (perturbed(next).norm() < base) {
          improved = true;
          break;
        }
        alpha /= 2.0;
      }
      if (!improved) return std::nullopt;
      q = next;
    }
    return perturbed(q).norm() <= 1e-10 ? std::optional<TorusQuadruple>(q) : std::nullopt;
  };

  // Seeds: points of the diagonal circle displaced along the Jacobian's
  // right singular directions, at two radii inside the neighborhood.
  DiagonalPerturbVerdict verdict;
  std::vector<TorusQuadruple> zeros;
  constexpr int kThetaSeeds = 48;
  for (int i = 0; i < kThetaSeeds; ++i) {
    const double theta = kTwoPi * i / kThetaSeeds;
    const TorusQuadruple d = TorusQuadruple::wrapped(theta, theta, theta, theta);
    Eigen::JacobiSVD<Eigen::Matrix4d> svd(jacobian(curve, problem, d), Eigen::ComputeFullV);
    for (int k = 0; k < 4; ++k) {
      for (double radius : {0.2 * delta, 0.6 * delta}) {
        for (double sgn : {1.0, -1.0}) {
          const Eigen::Vector4d off = sgn * radius * svd.matrixV().col(k);
          const TorusQuadruple seed = TorusQuadruple::wrapped(
              theta + off(0), theta + off(1), theta + off(2), theta + off(3));
          auto z = newton(seed);
          if (!z) continue;
          const double dz = diagonal_foot(*z).second;
          if (dz >= delta) continue;
          // With epsilon == 0 the diagonal itself is the zero set; only
          // off-manifold zeros count.
          if (epsilon == 0.0 && dz <= config.cluster_radius) continue;
          const bool dup = std::any_of(zeros.begin(), zeros.end(), [&](const TorusQuadruple& u) {
            return u.distance(*z) <= config.cluster_radius;
          });
          if (!dup) zeros.push_back(*z);
        }
      }
    }
  }

  std::sort(zeros.begin(), zeros.end(), [](const TorusQuadruple& a, const TorusQuadruple& b) {
    return a.lexicographically_less(b);
  });
  for (const TorusQuadruple& z : zeros) {
    DiagonalZero entry;
    entry.quadruple = z;
    entry.diagonal_distance = diagonal_foot(z).second;
    entry.residual_norm = perturbed(z).norm();
    const Eigen::Matrix4d j = fd_jacobian(z);
    const double det = j.determinant();
    entry.sign = det > 0.0 ? 1 : -1;
    verdict.zeros.push_back(entry);
    verdict.near_diagonal_signed += entry.sign;
  }
  verdict.pass = (epsilon == 0.0) ? verdict.zeros.empty()
                                  : (verdict.zeros.size() == 2 && verdict.near_diagonal_signed == 0);
  if (report != nullptr && report->signed_total)
    verdict.combined_total = *report->signed_total + verdict.near_diagonal_signed;
  return verdict;
}

}  // namespace peg
