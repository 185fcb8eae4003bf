#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "peg/residual.hpp"

using namespace peg;
using oracle::kPi;

TEST_CASE("diagonal quadruples are zeros") {
  const FourierCurve e = make_ellipse(2.0, 1.0);
  for (double t : {0.0, 1.1, 3.9, 5.7}) {
    const TorusQuadruple q = TorusQuadruple::wrapped(t, t, t, t);
    CHECK(residual_rect(e, 0.9, q).norm < 1e-14);
    CHECK(residual_quad(e, QuadData{0.3, 0.45, 1.2}, q).norm < 1e-14);
  }
}

TEST_CASE("ellipse oracle quadruples are zeros of the rectangle system") {
  const FourierCurve e = make_ellipse(2.0, 1.0);

  const double u = std::atan(2.0);
  CHECK(residual_rect(e, kPi / 2.0, oracle::ellipse_quadruple_u2(u)).norm <= 1e-12);

  for (double phi : {0.3, 0.8, 1.3}) {
    const double u1 = oracle::ellipse_u1(2.0, 1.0, phi);
    const double u2 = oracle::ellipse_u2(2.0, 1.0, phi);
    CHECK(residual_rect(e, phi, oracle::ellipse_quadruple_u1(u1)).norm <= 1e-12);
    CHECK(residual_rect(e, phi, oracle::ellipse_quadruple_u2(u2)).norm <= 1e-12);
  }
}

TEST_CASE("paired-but-distinct parameters are not zeros") {
  const FourierCurve e = make_ellipse(2.0, 1.0);
  const TorusQuadruple q = TorusQuadruple::wrapped(0.4, 0.4, 2.0, 2.0);
  CHECK(residual_rect(e, 1.0, q).norm > 1e-3);
}

TEST_CASE("residual equals twice the torus point difference") {
  const FourierCurve c = make_ellipse(2.0, 1.0);
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  for (int i = 0; i < 50; ++i) {
    const TorusQuadruple q =
        TorusQuadruple::wrapped(angle(rng), angle(rng), angle(rng), angle(rng));
    const double phi = 0.5 + angle(rng) / 8.0;
    const ResidualValue r = residual_rect(c, phi, q);
    const ComplexPair pL = point_L(c, q[0], q[1]);
    const ComplexPair pR = point_Lphi(c, phi, q[2], q[3]);
    const double dist = std::sqrt(std::norm(pL.z1 - pR.z1) + std::norm(pL.z2 - pR.z2));
    CHECK(r.norm == doctest::Approx(2.0 * dist).epsilon(1e-12));
  }
}

TEST_CASE("norm field matches components") {
  const FourierCurve c = make_ellipse(1.5, 0.8);
  const TorusQuadruple q = TorusQuadruple::wrapped(0.3, 1.2, 2.8, 5.0);
  const ResidualValue r = residual_rect(c, 1.1, q);
  double acc = 0.0;
  for (double x : r.components) acc += x * x;
  CHECK(r.norm == doctest::Approx(std::sqrt(acc)).epsilon(1e-14));
}

TEST_CASE("synthetic circle quads are zeros of the quad system") {
  const FourierCurve circ = make_ellipse(1.0, 1.0);
  std::mt19937 rng(29);
  for (int i = 0; i < 60; ++i) {
    const oracle::CircleQuad cq = oracle::make_circle_quad(rng);
    CHECK(residual_quad(circ, cq.data, cq.q).norm <= 1e-10);
  }
}

TEST_CASE("quad system at s=t=1/2 has the swapped rectangle zero set") {
  // With s = t = 1/2 the quad equations put the L-torus on the (t3,t4)
  // side, so rectangle zeros map to quad zeros under the block swap
  // (t1,t2,t3,t4) -> (t3,t4,t1,t2); the pegs are the same.
  const FourierCurve e = make_ellipse(2.0, 1.0);
  for (double phi : {0.5, 1.0, kPi / 2.0}) {
    const QuadData d{0.5, 0.5, phi};
    const double u1 = oracle::ellipse_u1(2.0, 1.0, phi);
    const TorusQuadruple q = oracle::ellipse_quadruple_u1(u1);
    const TorusQuadruple swapped = TorusQuadruple::wrapped(q[2], q[3], q[0], q[1]);
    CHECK(residual_rect(e, phi, q).norm <= 1e-12);
    CHECK(residual_quad(e, d, swapped).norm <= 1e-12);

    const Peg rect_peg = extract_rectangle(e, phi, q);
    const Peg quad_peg = extract_quad(e, d, swapped);
    CHECK(oracle::vertex_sets_match(quad_peg.vertices, rect_peg.vertices, 1e-10));
  }
}

TEST_CASE("jacobians match finite differences") {
  std::mt19937 rng(101);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::uniform_real_distribution<double> st(0.05, 0.5);
  for (int i = 0; i < 100; ++i) {
    const FourierCurve c = oracle::random_curve(rng);
    const TorusQuadruple q =
        TorusQuadruple::wrapped(angle(rng), angle(rng), angle(rng), angle(rng));

    Problem problem;
    if (i % 2 == 0) {
      problem = RectangleProblem{0.05 + 0.45 * angle(rng) / kPi, false};
    } else {
      problem = QuadProblem{QuadData{st(rng), st(rng), 0.1 + angle(rng) * 0.45}};
    }

    const Eigen::Matrix4d J = jacobian(c, problem, q);
    for (int col = 0; col < 4; ++col) {
      const auto fd = oracle::fd_jacobian_column(c, problem, q, col);
      for (int row = 0; row < 4; ++row) {
        const double scale = std::max(1e-9, std::abs(J(row, col)));
        CHECK(std::abs(J(row, col) - fd[static_cast<std::size_t>(row)]) <= 1e-6 * std::max(1.0, scale));
      }
    }
  }
}

TEST_CASE("jacobian column structure") {
  // column i depends on t_i only
  const FourierCurve c = make_ellipse(2.0, 1.0);
  const Problem problem = RectangleProblem{1.1, false};
  const TorusQuadruple q = TorusQuadruple::wrapped(0.3, 1.5, 2.9, 4.8);
  const Eigen::Matrix4d J = jacobian(c, problem, q);
  for (int i = 0; i < 4; ++i) {
    auto tt = q.t;
    tt[static_cast<std::size_t>(i)] += 0.37;
    const Eigen::Matrix4d J2 =
        jacobian(c, problem, TorusQuadruple::wrapped(tt[0], tt[1], tt[2], tt[3]));
    for (int col = 0; col < 4; ++col) {
      const double diff = (J.col(col) - J2.col(col)).norm();
      if (col == i)
        CHECK(diff > 1e-8);
      else
        CHECK(diff == 0.0);
    }
  }
}

TEST_CASE("circle jacobian is rank deficient on the diagonal") {
  const FourierCurve circ = make_ellipse(1.0, 1.0);
  for (double th : {0.0, 0.9, 2.2}) {
    const TorusQuadruple q = TorusQuadruple::wrapped(th, th, th, th);
    const Eigen::Matrix4d J = jacobian_rect(circ, 1.0, q);
    const Eigen::JacobiSVD<Eigen::Matrix4d> svd(J);
    const auto sv = svd.singularValues();
    CHECK(sv(3) / sv(0) < 1e-12);
  }
}

TEST_CASE("ellipse solutions are transverse at the jacobian level") {
  const FourierCurve e = make_ellipse(2.0, 1.0);
  const double phi = kPi / 3.0;
  for (const TorusQuadruple& q :
       {oracle::ellipse_quadruple_u1(oracle::ellipse_u1(2.0, 1.0, phi)),
        oracle::ellipse_quadruple_u2(oracle::ellipse_u2(2.0, 1.0, phi))}) {
    const Eigen::JacobiSVD<Eigen::Matrix4d> svd(jacobian_rect(e, phi, q));
    const auto sv = svd.singularValues();
    CHECK(sv(3) / sv(0) > 1e-6);
  }
}

TEST_CASE("tau preserves the zero set for every phi") {
  const FourierCurve e = make_ellipse(2.0, 1.0);
  for (double phi : {0.3, 0.9, 1.4}) {
    const double u1 = oracle::ellipse_u1(2.0, 1.0, phi);
    const TorusQuadruple q = oracle::ellipse_quadruple_u1(u1);
    CHECK(residual_rect(e, phi, tau(q)).norm <= 1e-10);
  }
}

TEST_CASE("sigma preserves the zero set at phi = pi/2 and has order 4") {
  const FourierCurve e = make_ellipse(2.0, 1.0);
  const double u = std::atan(2.0);
  TorusQuadruple q = oracle::ellipse_quadruple_u2(u);
  for (int k = 0; k < 4; ++k) {
    CHECK(residual_rect(e, kPi / 2.0, q).norm <= 1e-10);
    q = sigma(q);
  }
  CHECK(q.distance(oracle::ellipse_quadruple_u2(u)) < 1e-12);  // sigma^4 = id
  CHECK(sigma(sigma(oracle::ellipse_quadruple_u2(u)))
            .distance(tau(oracle::ellipse_quadruple_u2(u))) < 1e-12);  // sigma^2 = tau
}

TEST_CASE("problem validation and symmetry predicates") {
  const RectangleProblem generic{1.0, false};
  const RectangleProblem right{0.0, true};
  const RectangleProblem near_right{1.5707, false};
  const RectangleProblem bad_low{0.0, false};
  const RectangleProblem bad_high{2.0, false};
  CHECK_NOTHROW(generic.validate());
  CHECK_NOTHROW(right.validate());
  CHECK_THROWS_AS(bad_low.validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad_high.validate(), std::invalid_argument);
  CHECK(right.angle() == doctest::Approx(kPi / 2.0));

  const QuadProblem fold_quad{QuadData{0.5, 0.5, 1.0}};
  const QuadProblem generic_quad{QuadData{0.3, 0.5, 1.0}};
  CHECK(has_tau_symmetry(Problem{generic}));
  CHECK(has_tau_symmetry(Problem{fold_quad}));
  CHECK_FALSE(has_tau_symmetry(Problem{generic_quad}));
  CHECK(has_sigma_symmetry(Problem{right}));
  CHECK_FALSE(has_sigma_symmetry(Problem{near_right}));
}
