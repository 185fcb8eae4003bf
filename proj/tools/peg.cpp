// peg: command-line driver for the inscribed-peg solver.
//
// Subcommands: find, verify-doubling, scan-phi, check-curve, topology.
// Exit codes: 0 success, 2 embedding failure, 3 topology/orbit-integrity
// failure, 4 bad arguments.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "peg/json_io.hpp"
#include "peg/solver.hpp"
#include "peg/svg.hpp"
#include "peg/topology.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitEmbedding = 2;
constexpr int kExitTopology = 3;
constexpr int kExitUsage = 4;

constexpr double kPi = peg::kTwoPi / 2.0;

struct BadArgs : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CurveOpts {
  std::string curve_file;
  std::vector<double> ellipse;  // a b
};

void add_curve_opts(CLI::App* cmd, CurveOpts& opts) {
  auto* file = cmd->add_option("--curve", opts.curve_file, "curve JSON file");
  cmd->add_option("--ellipse", opts.ellipse, "ellipse axes A B")
      ->expected(2)
      ->excludes(file);
}

peg::FourierCurve load_curve_opts(const CurveOpts& opts) {
  if (!opts.curve_file.empty()) return peg::load_curve(opts.curve_file);
  if (opts.ellipse.size() == 2) return peg::make_ellipse(opts.ellipse[0], opts.ellipse[1]);
  throw BadArgs("one of --curve or --ellipse is required");
}

// Radians or the literal "right-angle"; anything else (degrees, suffixes) is
// rejected.
struct Phi {
  double value = 0.0;
  bool right_angle = false;
};

Phi parse_phi(const std::string& text) {
  if (text == "right-angle") return {kPi / 2.0, true};
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw BadArgs("--phi expects radians or 'right-angle', got '" + text + "'");
  }
  if (used != text.size())
    throw BadArgs("--phi expects radians or 'right-angle', got '" + text + "'");
  return {value, false};
}

struct SolveOpts {
  int grid = 24;
  int workers = 0;
  std::string out;
  std::string svg;
};

void add_solve_opts(CLI::App* cmd, SolveOpts& opts, bool with_output = true) {
  cmd->add_option("--grid", opts.grid, "seed grid points per torus axis");
  cmd->add_option("--workers", opts.workers, "worker threads (0 = hardware)");
  if (with_output) {
    cmd->add_option("--out", opts.out, "report JSON path (default stdout)");
    cmd->add_option("--svg", opts.svg, "SVG figure path");
  }
}

int default_workers() {
  if (const char* env = std::getenv("PEGLAB_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 0;
}

peg::SolveConfig make_config(const SolveOpts& opts) {
  peg::SolveConfig cfg;
  cfg.grid_per_axis = opts.grid;
  cfg.workers = opts.workers > 0 ? opts.workers : default_workers();
  cfg.validate();
  return cfg;
}

void emit(const peg::Json& j, const std::string& path) {
  if (path.empty())
    std::cout << j.dump(2) << "\n";
  else
    peg::write_json(j, path);
}

// ---- find ----------------------------------------------------------------

struct FindOpts {
  CurveOpts curve;
  SolveOpts solve;
  std::string phi;
  bool quad = false;
  double s = 0.5, t = 0.5;
};

int run_find(const FindOpts& opts) {
  const peg::FourierCurve curve = load_curve_opts(opts.curve);
  const Phi phi = parse_phi(opts.phi);

  peg::Problem problem;
  if (opts.quad) {
    if (phi.right_angle) throw BadArgs("--quad expects a numeric --phi in (0, pi)");
    problem = peg::QuadProblem{peg::QuadData{opts.s, opts.t, phi.value}};
  } else {
    problem = peg::RectangleProblem{phi.right_angle ? 0.0 : phi.value, phi.right_angle};
  }
  peg::validate(problem);

  const peg::SolveReport report = peg::solve(curve, problem, make_config(opts.solve));
  emit(peg::report_to_json(report), opts.solve.out);
  if (!opts.solve.svg.empty()) peg::write_svg(curve, report, opts.solve.svg);
  if (report.empty_result_warning)
    std::cerr << "warning: no off-diagonal solutions found; existence is expected, "
                 "try a denser grid\n";
  return kExitOk;
}

// ---- check-curve ---------------------------------------------------------

struct CheckOpts {
  CurveOpts curve;
  int samples = 512;
  std::string out;
};

int run_check(const CheckOpts& opts) {
  const peg::FourierCurve curve = load_curve_opts(opts.curve);
  const peg::EmbeddingVerdict v = peg::check_embedded(curve, opts.samples);
  peg::Json j = {{"embedded", v.embedded}, {"samples_used", v.samples_used}};
  if (v.worst_pair) {
    j["worst_pair"] = {{"t1", v.worst_pair->t1},
                      {"t2", v.worst_pair->t2},
                      {"distance", v.worst_pair->distance}};
  }
  emit(j, opts.out);
  return v.embedded ? kExitOk : kExitEmbedding;
}

// ---- topology ------------------------------------------------------------

struct TopologyOpts {
  CurveOpts curve;
  SolveOpts solve;
  std::string phi;
  std::string report_file;  // alternative input: an existing report
  double epsilon = 0.0;     // > 0 enables the diagonal perturbation count
  int global_sign = 1;
};

int run_topology(const TopologyOpts& opts) {
  std::optional<peg::SolveReport> report;
  std::optional<peg::FourierCurve> curve;

  if (!opts.report_file.empty()) {
    report = peg::report_from_json(peg::read_json(opts.report_file));
  } else {
    curve = load_curve_opts(opts.curve);
    const Phi phi = parse_phi(opts.phi);
    const peg::Problem problem =
        peg::RectangleProblem{phi.right_angle ? 0.0 : phi.value, phi.right_angle};
    peg::validate(problem);
    report = peg::solve(*curve, problem, make_config(opts.solve));
  }

  if (report->degenerate_family.found) {
    std::cerr << "degenerate solution family: the signed bookkeeping does not apply\n";
    return kExitTopology;
  }

  bool balanced = true;
  peg::CleanFormulaVerdict clean;
  try {
    clean = peg::clean_formula_check(*report);
  } catch (const peg::LedgerError& e) {
    balanced = false;
    std::cerr << "error: " << e.what() << "\n";
  }
  const peg::EulerLedger euler = peg::euler_bookkeeping(*report, opts.global_sign);
  peg::Json j = peg::topology_to_json(clean, euler);

  if (opts.epsilon > 0.0) {
    if (!curve) throw BadArgs("--epsilon needs a curve, not a pre-computed report");
    const peg::DiagonalPerturbVerdict v = peg::perturb_diagonal_count(
        *curve, report->problem, opts.epsilon, report->config, &*report);
    j["diagonal_perturbation"] = peg::diagonal_verdict_to_json(v);
    if (!v.pass) {
      emit(j, opts.solve.out);
      std::cerr << "diagonal perturbation did not produce the expected two zeros\n";
      return kExitTopology;
    }
  }

  emit(j, opts.solve.out);
  if (euler.contradiction)
    std::cerr << "Euler bookkeeping contradiction: chi = " << euler.chi << "\n";
  return (balanced && !euler.contradiction) ? kExitOk : kExitTopology;
}

// ---- verify-doubling -----------------------------------------------------

struct DoublingOpts {
  CurveOpts curve;
  SolveOpts solve;
  std::vector<std::string> phis;
  int family_size = 20;
  double amplitude = 0.02;
  int max_mode = 5;
  std::uint64_t seed = 1;
};

int run_doubling(const DoublingOpts& opts) {
  const peg::FourierCurve base = load_curve_opts(opts.curve);
  std::vector<std::string> phis = opts.phis;
  if (phis.empty()) phis = {"0.3", "0.7", "1.1", "1.5"};

  peg::Json runs = peg::Json::array();
  std::size_t degenerate_runs = 0;
  std::optional<std::size_t> min_orbits;
  bool all_totals_zero = true;
  bool violation = false;

  for (int i = 0; i < opts.family_size; ++i) {
    const peg::FourierCurve curve =
        i == 0 ? base : peg::perturb(base, opts.amplitude, opts.max_mode, opts.seed + static_cast<std::uint64_t>(i));
    for (const std::string& phi_text : phis) {
      const Phi phi = parse_phi(phi_text);
      const peg::Problem problem =
          peg::RectangleProblem{phi.right_angle ? 0.0 : phi.value, phi.right_angle};
      peg::validate(problem);
      const peg::SolveReport report = peg::solve(curve, problem, make_config(opts.solve));

      peg::Json entry = {{"curve_index", i},
                        {"phi", phi.right_angle ? peg::Json("right-angle") : peg::Json(phi.value)},
                        {"orbits", report.orbits.size()},
                        {"degenerate", report.degenerate_family.found}};
      if (report.degenerate_family.found) {
        ++degenerate_runs;
      } else {
        const int total = peg::signed_total(report);
        const peg::EulerLedger euler = peg::euler_bookkeeping(report);
        entry["signed_total"] = total;
        entry["doubling_certificate"] = euler.doubling_certificate.value_or(false);
        if (total != 0) all_totals_zero = false;
        if (!phi.right_angle) {
          if (!min_orbits || report.orbits.size() < *min_orbits)
            min_orbits = report.orbits.size();
          if (report.orbits.size() < 2) violation = true;
        }
      }
      runs.push_back(std::move(entry));
      std::cerr << "curve " << i << " phi " << phi_text << ": "
                << report.orbits.size() << " orbits"
                << (report.degenerate_family.found ? " (degenerate)" : "") << "\n";
    }
  }

  peg::Json summary = {{"runs", runs},
                      {"degenerate_runs", degenerate_runs},
                      {"all_signed_totals_zero", all_totals_zero}};
  if (min_orbits) summary["min_orbit_count"] = *min_orbits;
  emit(summary, opts.solve.out);

  if (violation || !all_totals_zero) {
    std::cerr << "doubling verification failed\n";
    return kExitTopology;
  }
  return kExitOk;
}

// ---- scan-phi ------------------------------------------------------------

struct ScanOpts {
  CurveOpts curve;
  SolveOpts solve;
  double phi_min = 0.2;
  double phi_max = 1.4;
  int steps = 25;
};

int run_scan(const ScanOpts& opts) {
  if (!(opts.phi_min > 0.0 && opts.phi_max < kPi / 2.0 && opts.phi_min <= opts.phi_max))
    throw BadArgs("scan range must lie inside (0, pi/2)");
  if (opts.steps < 2) throw BadArgs("--phi-steps must be at least 2");

  const peg::FourierCurve curve = load_curve_opts(opts.curve);
  const peg::SolveConfig cfg = make_config(opts.solve);

  peg::Json trace = peg::Json::array();
  std::vector<peg::TorusQuadruple> warm;

  for (int k = 0; k < opts.steps; ++k) {
    const double phi =
        opts.phi_min + (opts.phi_max - opts.phi_min) * k / (opts.steps - 1);
    const peg::Problem problem = peg::RectangleProblem{phi, false};

    // Continuation: refine the previous solutions at the new phi first and
    // accept the warm-started set only if every seed survives; otherwise
    // fall back to a fresh grid solve.
    std::optional<peg::SolveReport> report;
    if (!warm.empty()) {
      std::vector<peg::Solution> refined;
      bool ok = true;
      for (const peg::TorusQuadruple& q : warm) {
        const auto r = peg::refine_newton(curve, problem, q, cfg);
        if (!r || r->min_pairwise_distance() < cfg.diag_exclusion) {
          ok = false;
          break;
        }
        peg::Solution s;
        s.quadruple = *r;
        s.residual_norm = peg::residual(curve, problem, *r).norm;
        peg::classify_transversality(curve, problem, s, cfg);
        if (!s.transverse) {
          ok = false;
          break;
        }
        s.sign = peg::orientation_sign(curve, problem, *r);
        s.point = peg::point_Lphi(curve, phi, (*r)[2], (*r)[3]);
        refined.push_back(std::move(s));
      }
      if (ok) {
        try {
          peg::SolveReport warm_report;
          warm_report.problem = problem;
          warm_report.config = cfg;
          warm_report.curve_fingerprint = curve.fingerprint();
          warm_report.orbits = peg::quotient_symmetry(curve, problem, refined, cfg);
          std::size_t members = 0;
          int total = 0;
          for (const auto& orbit : warm_report.orbits) {
            members += orbit.members.size();
            for (const auto& m : orbit.members) total += m.sign.value_or(0);
          }
          warm_report.raw_solution_count = members;
          warm_report.signed_total = total;
          report = std::move(warm_report);
        } catch (const peg::OrbitIntegrityError&) {
          // continuation lost an orbit; re-seed from scratch below
        }
      }
    }
    if (!report) report = peg::solve(curve, problem, cfg);

    warm.clear();
    peg::Json orbits = peg::Json::array();
    for (const auto& orbit : report->orbits) {
      for (const auto& m : orbit.members) warm.push_back(m.quadruple);
      orbits.push_back(peg::peg_to_json(orbit.peg));
    }
    trace.push_back({{"phi", phi},
                     {"orbit_count", report->orbits.size()},
                     {"signed_total", report->signed_total.value_or(0)},
                     {"pegs", std::move(orbits)}});
    std::cerr << "phi " << phi << ": " << report->orbits.size() << " orbits\n";
  }

  emit(peg::Json{{"trace", std::move(trace)}}, opts.solve.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inscribed rectangle and cyclic quadrilateral solver"};
  app.require_subcommand(1);

  FindOpts find_opts;
  auto* find_cmd = app.add_subcommand("find", "solve one problem and write the report");
  add_curve_opts(find_cmd, find_opts.curve);
  add_solve_opts(find_cmd, find_opts.solve);
  find_cmd->add_option("--phi", find_opts.phi, "aspect angle in radians, or 'right-angle'")
      ->required();
  find_cmd->add_flag("--quad", find_opts.quad, "cyclic quadrilateral problem");
  find_cmd->add_option("--s", find_opts.s, "diagonal ratio s in (0, 1/2]");
  find_cmd->add_option("--t", find_opts.t, "diagonal ratio t in (0, 1/2]");

  CheckOpts check_opts;
  auto* check_cmd = app.add_subcommand("check-curve", "run the embedding check");
  add_curve_opts(check_cmd, check_opts.curve);
  check_cmd->add_option("--samples", check_opts.samples, "sample count (>= 64)");
  check_cmd->add_option("--out", check_opts.out, "verdict JSON path");

  TopologyOpts topo_opts;
  auto* topo_cmd = app.add_subcommand("topology", "signed-count and Euler bookkeeping");
  add_curve_opts(topo_cmd, topo_opts.curve);
  add_solve_opts(topo_cmd, topo_opts.solve);
  topo_cmd->add_option("--phi", topo_opts.phi, "aspect angle in radians, or 'right-angle'");
  topo_cmd->add_option("--report", topo_opts.report_file, "analyze an existing report file");
  topo_cmd->add_option("--epsilon", topo_opts.epsilon, "diagonal perturbation size");
  topo_cmd->add_option("--global-sign", topo_opts.global_sign, "parity convention, +1 or -1")
      ->check(CLI::IsMember({1, -1}));

  DoublingOpts doubling_opts;
  auto* doubling_cmd =
      app.add_subcommand("verify-doubling", "batch doubling check over a curve family");
  add_curve_opts(doubling_cmd, doubling_opts.curve);
  add_solve_opts(doubling_cmd, doubling_opts.solve);
  doubling_cmd->add_option("--phi", doubling_opts.phis,
                           "aspect angles (repeatable; default 0.3 0.7 1.1 1.5)");
  doubling_cmd->add_option("--family-size", doubling_opts.family_size, "number of curves");
  doubling_cmd->add_option("--amplitude", doubling_opts.amplitude, "perturbation amplitude");
  doubling_cmd->add_option("--max-mode", doubling_opts.max_mode, "perturbation mode cutoff");
  doubling_cmd->add_option("--seed", doubling_opts.seed, "base seed");

  ScanOpts scan_opts;
  auto* scan_cmd = app.add_subcommand("scan-phi", "sweep phi with warm-started continuation");
  add_curve_opts(scan_cmd, scan_opts.curve);
  add_solve_opts(scan_cmd, scan_opts.solve);
  scan_cmd->add_option("--phi-min", scan_opts.phi_min, "sweep start (radians)");
  scan_cmd->add_option("--phi-max", scan_opts.phi_max, "sweep end (radians)");
  scan_cmd->add_option("--phi-steps", scan_opts.steps, "number of sweep points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (find_cmd->parsed()) return run_find(find_opts);
    if (check_cmd->parsed()) return run_check(check_opts);
    if (topo_cmd->parsed()) return run_topology(topo_opts);
    if (doubling_cmd->parsed()) return run_doubling(doubling_opts);
    if (scan_cmd->parsed()) return run_scan(scan_opts);
  } catch (const BadArgs& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const peg::EmbeddingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEmbedding;
  } catch (const peg::OrbitIntegrityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTopology;
  } catch (const peg::LedgerError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTopology;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
