#pragma once

#include <array>

#include "peg/curve.hpp"

namespace peg {

/// A point of C^2, coordinates (z1, z2).
struct ComplexPair {
  Complex z1{0.0, 0.0};
  Complex z2{0.0, 0.0};
};

/// Shape data of a cyclic quadrilateral: s = |AX|/|AC|, t = |BX|/|BD|,
/// phi = angle AXB at the diagonal intersection X.
struct QuadData {
  double s = 0.5;
  double t = 0.5;
  double phi = 0.0;

  // s, t in (0, 1/2]; phi in (0, pi). Throws std::invalid_argument.
  void validate() const;
  bool is_rectangle() const { return s == 0.5 && t == 0.5; }
};

enum class PegKind { Rectangle, CyclicQuadrilateral };

/// An inscribed rectangle or cyclic quadrilateral: vertices (A,B,C,D) in
/// cyclic order, diagonals AC and BD meeting at diag_point.
struct Peg {
  PegKind kind = PegKind::Rectangle;
  std::array<Complex, 4> vertices{};  // A, B, C, D
  Complex diag_point{0.0, 0.0};       // X
  QuadData data;
  // Whether (A,B,C,D) winds counterclockwise; depends on the curve's
  // orientation and is recorded, not assumed.
  bool counterclockwise = true;
};

// The ambient linear maps.
ComplexPair map_l(ComplexPair p);                  // ((z1+z2)/2, (z1-z2)/2)
ComplexPair map_rot(double phi, ComplexPair p);    // (z1, z2 e^{i phi})
ComplexPair map_involution(ComplexPair p);         // (z1, -z2)
ComplexPair map_F(double r, ComplexPair p);        // ((1-r)z1 + r z2, sqrt(r(1-r))(z1-z2))

// Torus parameterizations in C^2.
ComplexPair point_L(const FourierCurve& curve, double t1, double t2);
ComplexPair point_Lphi(const FourierCurve& curve, double phi, double t3, double t4);
ComplexPair point_T1(const FourierCurve& curve, const QuadData& data, double t1, double t2);
ComplexPair point_T2(const FourierCurve& curve, const QuadData& data, double t3, double t4);

struct TorusQuadruple {
  std::array<double, 4> t{};  // canonical range [0, 2*pi)

  static TorusQuadruple wrapped(double t1, double t2, double t3, double t4);
  double operator[](int i) const { return t[static_cast<std::size_t>(i)]; }
  /// Euclidean torus distance (component-wise circle distance).
  double distance(const TorusQuadruple& other) const;
  /// Smallest pairwise circle distance among the four parameters.
  double min_pairwise_distance() const;
  bool lexicographically_less(const TorusQuadruple& other) const;
};

/// Rectangle from a refined solution quadruple: vertices
/// (A,B,C,D) = (gamma(t3), gamma(t1), gamma(t4), gamma(t2)),
/// X = (gamma(t1)+gamma(t2))/2. Checks the rectangle identities to
/// tol * diameter and throws std::runtime_error on violation.
Peg extract_rectangle(const FourierCurve& curve, double phi, const TorusQuadruple& q,
                      double tol = 1e-8);

/// Cyclic quadrilateral from a refined solution quadruple: A=gamma(t1),
/// C=gamma(t2), B=gamma(t3), D=gamma(t4), X=(1-s)A+sC. Checks the diagonal
/// and angle identities to tol * diameter.
Peg extract_quad(const FourierCurve& curve, const QuadData& data, const TorusQuadruple& q,
                 double tol = 1e-8);

/// Recomputes (s,t,phi) from vertex geometry alone. For rectangle pegs the
/// angle is folded into (0, pi/2]; otherwise into (0, pi).
QuadData recompute_data(const Peg& peg);

}  // namespace peg
