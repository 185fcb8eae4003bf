#include "peg/residual.hpp"

#include <cmath>
#include <stdexcept>

namespace peg {

namespace {

ResidualValue flatten(Complex e1, Complex e2) {
  ResidualValue r;
  r.components = {e1.real(), e1.imag(), e2.real(), e2.imag()};
  r.norm = std::sqrt(std::norm(e1) + std::norm(e2));
  return r;
}

}  // namespace

void RectangleProblem::validate() const {
  if (right_angle) return;
  if (!(phi > 0.0 && phi <= kTwoPi / 4.0))
    throw std::invalid_argument("RectangleProblem: phi must lie in (0, pi/2]");
}

void QuadProblem::validate() const { data.validate(); }

void validate(const Problem& problem) {
  std::visit([](const auto& p) { p.validate(); }, problem);
}

bool has_tau_symmetry(const Problem& problem) {
  if (std::holds_alternative<RectangleProblem>(problem)) return true;
  return std::get<QuadProblem>(problem).data.is_rectangle();
}

bool has_sigma_symmetry(const Problem& problem) {
  const auto* rect = std::get_if<RectangleProblem>(&problem);
  return rect != nullptr && rect->right_angle;
}

ResidualValue residual_rect(const FourierCurve& curve, double phi, const TorusQuadruple& q) {
  const Complex g1 = curve.eval(q[0]), g2 = curve.eval(q[1]);
  const Complex g3 = curve.eval(q[2]), g4 = curve.eval(q[3]);
  const Complex rot = std::polar(1.0, phi);
  return flatten(g1 + g2 - g3 - g4, g1 - g2 - (g3 - g4) * rot);
}

ResidualValue residual_quad(const FourierCurve& curve, const QuadData& data,
                            const TorusQuadruple& q) {
  const Complex g1 = curve.eval(q[0]), g2 = curve.eval(q[1]);
  const Complex g3 = curve.eval(q[2]), g4 = curve.eval(q[3]);
  const Complex rot = std::polar(1.0, data.phi);
  const double ws = std::sqrt(data.s * (1.0 - data.s));
  const double wt = std::sqrt(data.t * (1.0 - data.t));
  const Complex e1 = (1.0 - data.s) * g1 + data.s * g2 - (1.0 - data.t) * g3 - data.t * g4;
  const Complex e2 = ws * (g1 - g2) * rot - wt * (g3 - g4);
  return flatten(e1, e2);
}

ResidualValue residual(const FourierCurve& curve, const Problem& problem,
                       const TorusQuadruple& q) {
  if (const auto* rect = std::get_if<RectangleProblem>(&problem))
    return residual_rect(curve, rect->angle(), q);
  return residual_quad(curve, std::get<QuadProblem>(problem).data, q);
}

Eigen::Matrix4d jacobian_rect(const FourierCurve& curve, double phi, const TorusQuadruple& q) {
  const Complex d1 = curve.deriv(q[0], 1), d2 = curve.deriv(q[1], 1);
  const Complex d3 = curve.deriv(q[2], 1), d4 = curve.deriv(q[3], 1);
  const Complex rot = std::polar(1.0, phi);
  Eigen::Matrix4d j;
  const std::array<std::pair<Complex, Complex>, 4> cols = {{
      {d1, d1},
      {d2, -d2},
      {-d3, -rot * d3},
      {-d4, rot * d4},
  }};
  for (int i = 0; i < 4; ++i) {
    j(0, i) = cols[static_cast<std::size_t>(i)].first.real();
    j(1, i) = cols[static_cast<std::size_t>(i)].first.imag();
    j(2, i) = cols[static_cast<std::size_t>(i)].second.real();
    j(3, i) = cols[static_cast<std::size_t>(i)].second.imag();
  }
  return j;
}

Eigen::Matrix4d jacobian_quad(const FourierCurve& curve, const QuadData& data,
                              const TorusQuadruple& q) {
  const Complex d1 = curve.deriv(q[0], 1), d2 = curve.deriv(q[1], 1);
  const Complex d3 = curve.deriv(q[2], 1), d4 = curve.deriv(q[3], 1);
  const Complex rot = std::polar(1.0, data.phi);
  const double ws = std::sqrt(data.s * (1.0 - data.s));
  const double wt = std::sqrt(data.t * (1.0 - data.t));
  Eigen::Matrix4d j;
  const std::array<std::pair<Complex, Complex>, 4> cols = {{
      {(1.0 - data.s) * d1, ws * rot * d1},
      {data.s * d2, -ws * rot * d2},
      {-(1.0 - data.t) * d3, -wt * d3},
      {-data.t * d4, wt * d4},
  }};
  for (int i = 0; i < 4; ++i) {
    j(0, i) = cols[static_cast<std::size_t>(i)].first.real();
    j(1, i) = cols[static_cast<std::size_t>(i)].first.imag();
    j(2, i) = cols[static_cast<std::size_t>(i)].second.real();
    j(3, i) = cols[static_cast<std::size_t>(i)].second.imag();
  }
  return j;
}

Eigen::Matrix4d jacobian(const FourierCurve& curve, const Problem& problem,
                         const TorusQuadruple& q) {
  if (const auto* rect = std::get_if<RectangleProblem>(&problem))
    return jacobian_rect(curve, rect->angle(), q);
  return jacobian_quad(curve, std::get<QuadProblem>(problem).data, q);
}

TorusQuadruple tau(const TorusQuadruple& q) {
  return {std::array<double, 4>{q[1], q[0], q[3], q[2]}};
}

TorusQuadruple sigma(const TorusQuadruple& q) {
  return {std::array<double, 4>{q[2], q[3], q[1], q[0]}};
}

}  // namespace peg
