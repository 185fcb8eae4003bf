#include "peg/json_io.hpp"

#include <fstream>

namespace peg {

namespace {

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

Json quadruple_to_json(const TorusQuadruple& q) {
  return Json::array({q[0], q[1], q[2], q[3]});
}

TorusQuadruple quadruple_from_json(const Json& j) {
  return {std::array<double, 4>{j.at(0).get<double>(), j.at(1).get<double>(),
                                j.at(2).get<double>(), j.at(3).get<double>()}};
}

Json solution_to_json(const Solution& s) {
  Json j;
  j["quadruple"] = quadruple_to_json(s.quadruple);
  j["point"] = {complex_to_json(s.point.z1), complex_to_json(s.point.z2)};
  j["residual_norm"] = s.residual_norm;
  j["sv_min"] = s.sv_min;
  j["sv_max"] = s.sv_max;
  j["transverse"] = s.transverse;
  if (s.sign)
    j["sign"] = *s.sign;
  else
    j["sign"] = nullptr;
  return j;
}

Solution solution_from_json(const Json& j) {
  Solution s;
  s.quadruple = quadruple_from_json(j.at("quadruple"));
  s.point = {complex_from_json(j.at("point").at(0)), complex_from_json(j.at("point").at(1))};
  s.residual_norm = j.at("residual_norm").get<double>();
  s.sv_min = j.at("sv_min").get<double>();
  s.sv_max = j.at("sv_max").get<double>();
  s.transverse = j.at("transverse").get<bool>();
  if (!j.at("sign").is_null()) s.sign = j.at("sign").get<int>();
  return s;
}

}  // namespace

Json curve_to_json(const FourierCurve& curve) {
  Json j;
  j["type"] = "fourier";
  j["max_mode"] = curve.max_mode();
  Json coeffs = Json::array();
  for (const Complex& c : curve.coeffs()) coeffs.push_back(complex_to_json(c));
  j["coeffs"] = coeffs;
  return j;
}

FourierCurve curve_from_json(const Json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "ellipse") return make_ellipse(j.at("a").get<double>(), j.at("b").get<double>());
  if (type != "fourier") throw std::invalid_argument("curve_from_json: unknown curve type");
  const int m = j.at("max_mode").get<int>();
  const Json& coeffs = j.at("coeffs");
  if (coeffs.size() != static_cast<std::size_t>(2 * m + 1))
    throw std::invalid_argument("curve_from_json: expected 2*max_mode+1 coefficients");
  std::vector<Complex> c;
  c.reserve(coeffs.size());
  for (const Json& e : coeffs) c.push_back(complex_from_json(e));
  return FourierCurve(m, std::move(c));
}

FourierCurve load_curve(const std::string& path) { return curve_from_json(read_json(path)); }

Json peg_to_json(const Peg& peg) {
  Json j;
  j["kind"] = peg.kind == PegKind::Rectangle ? "rectangle" : "cyclic_quadrilateral";
  Json verts = Json::array();
  for (const Complex& v : peg.vertices) verts.push_back(complex_to_json(v));
  j["vertices"] = verts;
  j["diag_point"] = complex_to_json(peg.diag_point);
  j["data"] = {{"s", peg.data.s}, {"t", peg.data.t}, {"phi", peg.data.phi}};
  j["counterclockwise"] = peg.counterclockwise;
  return j;
}

Peg peg_from_json(const Json& j) {
  Peg peg;
  peg.kind = j.at("kind").get<std::string>() == "rectangle" ? PegKind::Rectangle
                                                            : PegKind::CyclicQuadrilateral;
  for (int i = 0; i < 4; ++i)
    peg.vertices[static_cast<std::size_t>(i)] = complex_from_json(j.at("vertices").at(i));
  peg.diag_point = complex_from_json(j.at("diag_point"));
  peg.data = {j.at("data").at("s").get<double>(), j.at("data").at("t").get<double>(),
              j.at("data").at("phi").get<double>()};
  if (j.contains("counterclockwise")) peg.counterclockwise = j.at("counterclockwise").get<bool>();
  return peg;
}

Json problem_to_json(const Problem& problem) {
  Json j;
  if (const auto* rect = std::get_if<RectangleProblem>(&problem)) {
    j["kind"] = "rectangle";
    j["right_angle"] = rect->right_angle;
    j["phi"] = rect->angle();
  } else {
    const QuadData& d = std::get<QuadProblem>(problem).data;
    j["kind"] = "cyclic_quadrilateral";
    j["s"] = d.s;
    j["t"] = d.t;
    j["phi"] = d.phi;
  }
  return j;
}

Problem problem_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "rectangle") {
    RectangleProblem rect;
    rect.right_angle = j.value("right_angle", false);
    rect.phi = j.at("phi").get<double>();
    return rect;
  }
  if (kind == "cyclic_quadrilateral") {
    QuadProblem quad;
    quad.data = {j.at("s").get<double>(), j.at("t").get<double>(), j.at("phi").get<double>()};
    return quad;
  }
  throw std::invalid_argument("problem_from_json: unknown problem kind");
}

Json config_to_json(const SolveConfig& c) {
  return Json{{"grid_per_axis", c.grid_per_axis},
              {"newton_max_iters", c.newton_max_iters},
              {"newton_tol", c.newton_tol},
              {"cluster_radius", c.cluster_radius},
              {"diag_exclusion", c.diag_exclusion},
              {"sv_ratio_threshold", c.sv_ratio_threshold},
              {"degenerate_chain_min", c.degenerate_chain_min},
              {"workers", c.workers}};
}

SolveConfig config_from_json(const Json& j) {
  SolveConfig c;
  c.grid_per_axis = j.value("grid_per_axis", c.grid_per_axis);
  c.newton_max_iters = j.value("newton_max_iters", c.newton_max_iters);
  c.newton_tol = j.value("newton_tol", c.newton_tol);
  c.cluster_radius = j.value("cluster_radius", c.cluster_radius);
  c.diag_exclusion = j.value("diag_exclusion", c.diag_exclusion);
  c.sv_ratio_threshold = j.value("sv_ratio_threshold", c.sv_ratio_threshold);
  c.degenerate_chain_min = j.value("degenerate_chain_min", c.degenerate_chain_min);
  c.workers = j.value("workers", c.workers);
  return c;
}

Json report_to_json(const SolveReport& report, bool include_timing) {
  Json j;
  j["problem"] = problem_to_json(report.problem);
  Json orbits = Json::array();
  for (const PegOrbit& orbit : report.orbits) {
    Json o;
    Json members = Json::array();
    for (const Solution& m : orbit.members) members.push_back(solution_to_json(m));
    o["members"] = members;
    o["peg"] = peg_to_json(orbit.peg);
    o["orbit_sign"] = orbit.orbit_sign;
    o["representative"] = orbit.representative;
    orbits.push_back(o);
  }
  j["orbits"] = orbits;
  j["raw_solution_count"] = report.raw_solution_count;
  if (report.signed_total)
    j["signed_total"] = *report.signed_total;
  else
    j["signed_total"] = nullptr;
  Json family;
  family["found"] = report.degenerate_family.found;
  family["chain_size"] = report.degenerate_family.chain_size;
  Json chain = Json::array();
  for (const TorusQuadruple& q : report.degenerate_family.chain)
    chain.push_back(quadruple_to_json(q));
  family["chain"] = chain;
  Json isolated = Json::array();
  for (const TorusQuadruple& q : report.degenerate_family.isolated)
    isolated.push_back(quadruple_to_json(q));
  family["isolated"] = isolated;
  j["degenerate_family"] = family;
  j["config"] = config_to_json(report.config);
  j["curve_fingerprint"] = report.curve_fingerprint;
  j["empty_result_warning"] = report.empty_result_warning;
  if (include_timing) j["timing_ms"] = report.timing_ms;
  return j;
}

SolveReport report_from_json(const Json& j) {
  SolveReport report;
  report.problem = problem_from_json(j.at("problem"));
  for (const Json& o : j.at("orbits")) {
    PegOrbit orbit;
    for (const Json& m : o.at("members")) orbit.members.push_back(solution_from_json(m));
    orbit.peg = peg_from_json(o.at("peg"));
    orbit.orbit_sign = o.at("orbit_sign").get<int>();
    orbit.representative = o.at("representative").get<std::size_t>();
    report.orbits.push_back(std::move(orbit));
  }
  report.raw_solution_count = j.at("raw_solution_count").get<std::size_t>();
  if (!j.at("signed_total").is_null()) report.signed_total = j.at("signed_total").get<int>();
  const Json& family = j.at("degenerate_family");
  report.degenerate_family.found = family.at("found").get<bool>();
  report.degenerate_family.chain_size = family.at("chain_size").get<std::size_t>();
  for (const Json& q : family.at("chain"))
    report.degenerate_family.chain.push_back(quadruple_from_json(q));
  for (const Json& q : family.at("isolated"))
    report.degenerate_family.isolated.push_back(quadruple_from_json(q));
  report.config = config_from_json(j.at("config"));
  report.curve_fingerprint = j.at("curve_fingerprint").get<std::uint64_t>();
  report.empty_result_warning = j.value("empty_result_warning", false);
  report.timing_ms = j.value("timing_ms", 0.0);
  return report;
}

Json topology_to_json(const CleanFormulaVerdict& clean, const EulerLedger& euler) {
  Json j;
  j["signed_total"] = clean.total;
  j["euler_chi"] = euler.chi;
  Json ledger = Json::array();
  for (const LedgerItem& item : clean.items)
    ledger.push_back({{"description", item.description},
                      {"contribution", item.contribution},
                      {"counts", item.counts}});
  j["ledger"] = ledger;
  if (euler.doubling_certificate)
    j["doubling_certificate"] = *euler.doubling_certificate;
  else
    j["doubling_certificate"] = "n/a";
  j["global_sign"] = euler.global_sign;
  j["contradiction"] = euler.contradiction;
  Json generators = Json::array();
  for (const GradedGenerator& g : euler.generators)
    generators.push_back({{"label", g.label},
                          {"parity", g.parity},
                          {"origin", g.origin == GradedGenerator::Origin::CircleMorsePoint
                                         ? "circle-morse-point"
                                         : "transverse-pair-member"}});
  j["generators"] = generators;
  return j;
}

Json diagonal_verdict_to_json(const DiagonalPerturbVerdict& verdict) {
  Json j;
  Json zeros = Json::array();
  for (const DiagonalZero& z : verdict.zeros)
    zeros.push_back({{"quadruple", quadruple_to_json(z.quadruple)},
                     {"diagonal_distance", z.diagonal_distance},
                     {"residual_norm", z.residual_norm},
                     {"sign", z.sign}});
  j["zeros"] = zeros;
  j["near_diagonal_signed"] = verdict.near_diagonal_signed;
  if (verdict.combined_total)
    j["combined_total"] = *verdict.combined_total;
  else
    j["combined_total"] = nullptr;
  j["pass"] = verdict.pass;
  return j;
}

void write_json(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_json: cannot open " + path);
  out << j.dump(2) << "\n";
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_json: cannot open " + path);
  Json j;
  in >> j;
  return j;
}

}  // namespace peg
