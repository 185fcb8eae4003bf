#include "peg/svg.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace peg {

namespace {

struct Frame {
  double xmin, xmax, ymin, ymax;
  double width = 640.0, height = 640.0;

  double sx(double x) const { return (x - xmin) / (xmax - xmin) * width; }
  double sy(double y) const { return height - (y - ymin) / (ymax - ymin) * height; }
};

const char* sign_color(int sign) {
  if (sign > 0) return "#c0392b";
  if (sign < 0) return "#2980b9";
  return "#7f8c8d";
}

}  // namespace

std::string render_svg(const FourierCurve& curve, const SolveReport& report) {
  constexpr int kCurveSamples = 512;
  std::vector<Complex> pts(kCurveSamples);
  for (int i = 0; i < kCurveSamples; ++i) pts[static_cast<std::size_t>(i)] = curve.eval(kTwoPi * i / kCurveSamples);

  Frame frame{pts[0].real(), pts[0].real(), pts[0].imag(), pts[0].imag()};
  for (const Complex& p : pts) {
    frame.xmin = std::min(frame.xmin, p.real());
    frame.xmax = std::max(frame.xmax, p.real());
    frame.ymin = std::min(frame.ymin, p.imag());
    frame.ymax = std::max(frame.ymax, p.imag());
  }
  const double mx = 0.1 * (frame.xmax - frame.xmin), my = 0.1 * (frame.ymax - frame.ymin);
  frame.xmin -= mx;
  frame.xmax += mx;
  frame.ymin -= my;
  frame.ymax += my;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << frame.width << "\" height=\""
      << frame.height << "\" viewBox=\"0 0 " << frame.width << " " << frame.height << "\">\n";

  // Degenerate family: shade the locus of peg vertices along the chain.
  if (report.degenerate_family.found) {
    svg << "  <g fill=\"#f1c40f\" fill-opacity=\"0.35\" stroke=\"none\">\n";
    for (const TorusQuadruple& q : report.degenerate_family.chain)
      for (int i = 0; i < 4; ++i) {
        const Complex v = curve.eval(q[i]);
        svg << "    <circle cx=\"" << frame.sx(v.real()) << "\" cy=\"" << frame.sy(v.imag())
            << "\" r=\"3\"/>\n";
      }
    svg << "  </g>\n";
  }

  // The curve: one path.
  svg << "  <path fill=\"none\" stroke=\"#2c3e50\" stroke-width=\"1.5\" d=\"M";
  for (int i = 0; i <= kCurveSamples; ++i) {
    const Complex& p = pts[static_cast<std::size_t>(i % kCurveSamples)];
    svg << (i == 0 ? "" : " L") << frame.sx(p.real()) << " " << frame.sy(p.imag());
  }
  svg << " Z\"/>\n";

  // One polygon per orbit plus its diagonals and a sign label.
  for (std::size_t i = 0; i < report.orbits.size(); ++i) {
    const PegOrbit& orbit = report.orbits[i];
    const char* color = sign_color(orbit.orbit_sign);
    svg << "  <polygon fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
    for (const Complex& v : orbit.peg.vertices)
      svg << frame.sx(v.real()) << "," << frame.sy(v.imag()) << " ";
    svg << "\"/>\n";
    for (int k = 0; k < 2; ++k) {
      const Complex a = orbit.peg.vertices[static_cast<std::size_t>(k)];
      const Complex b = orbit.peg.vertices[static_cast<std::size_t>(k + 2)];
      svg << "  <line stroke=\"" << color << "\" stroke-width=\"0.6\" stroke-dasharray=\"4 3\" x1=\""
          << frame.sx(a.real()) << "\" y1=\"" << frame.sy(a.imag()) << "\" x2=\""
          << frame.sx(b.real()) << "\" y2=\"" << frame.sy(b.imag()) << "\"/>\n";
    }
    const Complex v0 = orbit.peg.vertices[0];
    svg << "  <text x=\"" << frame.sx(v0.real()) + 5 << "\" y=\"" << frame.sy(v0.imag()) - 5
        << "\" font-size=\"12\" fill=\"" << color << "\">orbit " << i << " ("
        << (orbit.orbit_sign > 0 ? "+" : orbit.orbit_sign < 0 ? "-" : "?") << ")</text>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

void write_svg(const FourierCurve& curve, const SolveReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_svg: cannot open " + path);
  out << render_svg(curve, report);
}

}  // namespace peg
