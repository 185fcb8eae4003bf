#pragma once

#include <variant>

#include <Eigen/Dense>

#include "peg/geometry.hpp"

namespace peg {

/// The rectangle system at aspect angle phi. right_angle marks phi == pi/2
/// exactly; the C4 symmetry quotient applies only when the flag is set.
struct RectangleProblem {
  double phi = 0.0;
  bool right_angle = false;

  double angle() const { return right_angle ? kTwoPi / 4.0 : phi; }
  void validate() const;
};

/// The cyclic-quadrilateral system R_phi(F_s(A,C)) = F_t(B,D).
struct QuadProblem {
  QuadData data;
  void validate() const;
};

using Problem = std::variant<RectangleProblem, QuadProblem>;

void validate(const Problem& problem);

/// Whether the problem's solution set carries the tau symmetry
/// (rectangles, and quads with s = t = 1/2).
bool has_tau_symmetry(const Problem& problem);

/// Whether the C4 quotient applies (right-angle rectangles only).
bool has_sigma_symmetry(const Problem& problem);

/// Value of the residual system at a quadruple, flattened in the fixed
/// order (Re eq1, Im eq1, Re eq2, Im eq2).
struct ResidualValue {
  std::array<double, 4> components{};
  double norm = 0.0;
};

/// G(q) = (g1+g2-g3-g4, g1-g2-(g3-g4)e^{i phi}) with g_i = gamma(t_i).
/// Un-halved: equals twice the difference point_L - point_Lphi.
ResidualValue residual_rect(const FourierCurve& curve, double phi, const TorusQuadruple& q);

/// point_T1(t1,t2) - point_T2(t3,t4) flattened the same way.
ResidualValue residual_quad(const FourierCurve& curve, const QuadData& data,
                            const TorusQuadruple& q);

ResidualValue residual(const FourierCurve& curve, const Problem& problem,
                       const TorusQuadruple& q);

/// Column i is the partial derivative of the residual in t_i.
Eigen::Matrix4d jacobian_rect(const FourierCurve& curve, double phi, const TorusQuadruple& q);
Eigen::Matrix4d jacobian_quad(const FourierCurve& curve, const QuadData& data,
                              const TorusQuadruple& q);
Eigen::Matrix4d jacobian(const FourierCurve& curve, const Problem& problem,
                         const TorusQuadruple& q);

// The named quadruple transforms shared by tests and the symmetry quotient.
TorusQuadruple tau(const TorusQuadruple& q);    // (t2, t1, t4, t3); all phi
TorusQuadruple sigma(const TorusQuadruple& q);  // (t3, t4, t2, t1); phi = pi/2, sigma^2 = tau

}  // namespace peg
