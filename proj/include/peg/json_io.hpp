#pragma once

#include <string>

#include <json.hpp>

#include "peg/topology.hpp"

namespace peg {

using Json = nlohmann::json;

// Curve file format:
//   {"type":"fourier","max_mode":m,"coeffs":[[re,im],...]}   (c_{-m}..c_{m})
//   {"type":"ellipse","a":A,"b":B}
Json curve_to_json(const FourierCurve& curve);
FourierCurve curve_from_json(const Json& j);
FourierCurve load_curve(const std::string& path);

Json peg_to_json(const Peg& peg);
Peg peg_from_json(const Json& j);

Json problem_to_json(const Problem& problem);
Problem problem_from_json(const Json& j);

Json config_to_json(const SolveConfig& config);
SolveConfig config_from_json(const Json& j);

// The timing field breaks byte-for-byte reproducibility, so it is optional;
// everything else is canonical (sorted keys, shortest round-trip doubles).
Json report_to_json(const SolveReport& report, bool include_timing = true);
SolveReport report_from_json(const Json& j);

/// Appends the "topology" block
///   {"signed_total":..,"euler_chi":..,"ledger":[...],"doubling_certificate":..}
Json topology_to_json(const CleanFormulaVerdict& clean, const EulerLedger& euler);

Json diagonal_verdict_to_json(const DiagonalPerturbVerdict& verdict);

void write_json(const Json& j, const std::string& path);
Json read_json(const std::string& path);

}  // namespace peg
