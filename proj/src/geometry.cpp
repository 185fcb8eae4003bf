#include "peg/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace peg {

namespace {

// Unsigned angle between two nonzero plane vectors, in [0, pi].
double unsigned_angle(Complex u, Complex v) {
  const double cross = u.real() * v.imag() - u.imag() * v.real();
  const double dot = u.real() * v.real() + u.imag() * v.imag();
  return std::fabs(std::atan2(cross, dot));
}

double shoelace_area(const std::array<Complex, 4>& v) {
  double a = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Complex& p = v[static_cast<std::size_t>(i)];
    const Complex& q = v[static_cast<std::size_t>((i + 1) % 4)];
    a += p.real() * q.imag() - q.real() * p.imag();
  }
  return a / 2.0;
}

}  // namespace

void QuadData::validate() const {
  if (!(s > 0.0 && s <= 0.5)) throw std::invalid_argument("QuadData: s must lie in (0, 1/2]");
  if (!(t > 0.0 && t <= 0.5)) throw std::invalid_argument("QuadData: t must lie in (0, 1/2]");
  if (!(phi > 0.0 && phi < kTwoPi / 2.0))
    throw std::invalid_argument("QuadData: phi must lie in (0, pi)");
}

ComplexPair map_l(ComplexPair p) { return {(p.z1 + p.z2) / 2.0, (p.z1 - p.z2) / 2.0}; }

ComplexPair map_rot(double phi, ComplexPair p) { return {p.z1, p.z2 * std::polar(1.0, phi)}; }

ComplexPair map_involution(ComplexPair p) { return {p.z1, -p.z2}; }

ComplexPair map_F(double r, ComplexPair p) {
  if (!(r > 0.0 && r <= 0.5)) throw std::invalid_argument("map_F: r must lie in (0, 1/2]");
  return {(1.0 - r) * p.z1 + r * p.z2, std::sqrt(r * (1.0 - r)) * (p.z1 - p.z2)};
}

ComplexPair point_L(const FourierCurve& curve, double t1, double t2) {
  return map_l({curve.eval(t1), curve.eval(t2)});
}

ComplexPair point_Lphi(const FourierCurve& curve, double phi, double t3, double t4) {
  return map_rot(phi, map_l({curve.eval(t3), curve.eval(t4)}));
}

ComplexPair point_T1(const FourierCurve& curve, const QuadData& data, double t1, double t2) {
  return map_rot(data.phi, map_F(data.s, {curve.eval(t1), curve.eval(t2)}));
}

ComplexPair point_T2(const FourierCurve& curve, const QuadData& data, double t3, double t4) {
  return map_F(data.t, {curve.eval(t3), curve.eval(t4)});
}

TorusQuadruple TorusQuadruple::wrapped(double t1, double t2, double t3, double t4) {
  return {std::array<double, 4>{wrap_angle(t1), wrap_angle(t2), wrap_angle(t3), wrap_angle(t4)}};
}

double TorusQuadruple::distance(const TorusQuadruple& other) const {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double d = circle_distance(t[static_cast<std::size_t>(i)],
                                     other.t[static_cast<std::size_t>(i)]);
    s += d * d;
  }
  return std::sqrt(s);
}

double TorusQuadruple::min_pairwise_distance() const {
  double m = kTwoPi;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      m = std::min(m, circle_distance(t[static_cast<std::size_t>(i)],
                                      t[static_cast<std::size_t>(j)]));
  return m;
}

bool TorusQuadruple::lexicographically_less(const TorusQuadruple& other) const {
  for (int i = 0; i < 4; ++i) {
    const double a = t[static_cast<std::size_t>(i)], b = other.t[static_cast<std::size_t>(i)];
    if (a < b) return true;
    if (a > b) return false;
  }
  return false;
}

Peg extract_rectangle(const FourierCurve& curve, double phi, const TorusQuadruple& q,
                      double tol) {
  const double scale = curve.diameter();
  const Complex g1 = curve.eval(q[0]), g2 = curve.eval(q[1]);
  const Complex g3 = curve.eval(q[2]), g4 = curve.eval(q[3]);

  Peg peg;
  peg.kind = PegKind::Rectangle;
  peg.vertices = {g3, g1, g4, g2};
  peg.diag_point = (g1 + g2) / 2.0;
  peg.data = {0.5, 0.5, phi};

  const Complex x = peg.diag_point;
  const double ra = std::abs(peg.vertices[0] - x);
  if (ra < tol * scale)
    throw std::runtime_error("extract_rectangle: degenerate (diagonal) quadruple");
  for (int i = 1; i < 4; ++i) {
    const double ri = std::abs(peg.vertices[static_cast<std::size_t>(i)] - x);
    if (std::fabs(ri - ra) > tol * scale)
      throw std::runtime_error("extract_rectangle: vertices not equidistant from center");
  }
  const double ang = unsigned_angle(peg.vertices[0] - x, peg.vertices[1] - x);
  if (std::fabs(ang - phi) > 100.0 * tol)
    throw std::runtime_error("extract_rectangle: aspect angle mismatch");
  peg.counterclockwise = shoelace_area(peg.vertices) > 0.0;
  return peg;
}

Peg extract_quad(const FourierCurve& curve, const QuadData& data, const TorusQuadruple& q,
                 double tol) {
  data.validate();
  const double scale = curve.diameter();
  const Complex a = curve.eval(q[0]), c = curve.eval(q[1]);
  const Complex b = curve.eval(q[2]), d = curve.eval(q[3]);

  if (std::abs(a - c) < tol * scale || std::abs(b - d) < tol * scale)
    throw std::runtime_error("extract_quad: degenerate (diagonal) quadruple");

  Peg peg;
  peg.kind = PegKind::CyclicQuadrilateral;
  peg.vertices = {a, b, c, d};
  peg.diag_point = (1.0 - data.s) * a + data.s * c;
  peg.data = data;

  const Complex x = peg.diag_point;
  if (std::abs(x - ((1.0 - data.t) * b + data.t * d)) > tol * scale)
    throw std::runtime_error("extract_quad: diagonals do not meet at the stated point");
  const double ang = unsigned_angle(c - a, d - b);
  if (std::fabs(ang - data.phi) > 100.0 * tol)
    throw std::runtime_error("extract_quad: diagonal angle mismatch");
  peg.counterclockwise = shoelace_area(peg.vertices) > 0.0;
  return peg;
}

QuadData recompute_data(const Peg& peg) {
  const Complex a = peg.vertices[0], b = peg.vertices[1];
  const Complex c = peg.vertices[2], d = peg.vertices[3];
  const Complex ac = c - a, bd = d - b;
  if (std::abs(ac) == 0.0 || std::abs(bd) == 0.0)
    throw std::runtime_error("recompute_data: coincident vertices");

  // X = A + s*(C-A) = B + t*(D-B), a real 2x2 system in (s, t).
  const double det = ac.real() * (-bd.imag()) - (-bd.real()) * ac.imag();
  if (std::fabs(det) < 1e-15 * std::abs(ac) * std::abs(bd))
    throw std::runtime_error("recompute_data: diagonals are parallel");
  const Complex rhs = b - a;
  const double s = (rhs.real() * (-bd.imag()) - (-bd.real()) * rhs.imag()) / det;
  const double t = (ac.real() * rhs.imag() - rhs.real() * ac.imag()) / det;

  const Complex x = a + s * ac;
  double phi = unsigned_angle(a - x, b - x);
  if (peg.kind == PegKind::Rectangle && phi > kTwoPi / 4.0) phi = kTwoPi / 2.0 - phi;
  return {s, t, phi};
}

}  // namespace peg
