#pragma once

#include "peg/solver.hpp"

namespace peg {

/// Thrown by the bookkeeping checks when a ledger does not balance or a
/// sign/parity assignment is inconsistent (CLI exit 3).
struct LedgerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Orientation sign at a transverse solution: sign of the determinant of
/// the 4x4 real matrix whose columns are the flattened tangent vectors of
/// the two torus parameterizations, in parameter order, with the ambient
/// orientation (Re z1, Im z1, Re z2, Im z2). Throws when the determinant
/// magnitude signals non-transversality.
int orientation_sign(const FourierCurve& curve, const Problem& problem,
                     const TorusQuadruple& q);

/// Sum of orientation signs over all raw transverse solutions of a
/// non-degenerate report. Throws LedgerError on unsigned solutions.
int signed_total(const SolveReport& report);

struct LedgerItem {
  std::string description;
  int contribution = 0;   // signed contribution to the intersection number
  bool counts = true;     // false for the "x 0" circle entry
};

struct CleanFormulaVerdict {
  std::vector<LedgerItem> items;
  int total = 0;          // must equal the displaceability value 0
  bool balanced = false;
  // Set on rectangle problems with an empty off-diagonal solution set:
  // the ledger balances but existence is guaranteed, so warn.
  bool empty_warning = false;
};

/// Itemizes L . L_phi = sign(circle) * chi(S^1) + signed_total and checks
/// that it vanishes. Throws LedgerError when the ledger does not balance.
CleanFormulaVerdict clean_formula_check(const SolveReport& report);

struct GradedGenerator {
  std::string label;
  int parity = 0;  // degree mod 2
  enum class Origin { CircleMorsePoint, TransversePairMember } origin;
};

struct EulerLedger {
  std::vector<GradedGenerator> generators;
  int chi = 0;
  int global_sign = 1;
  bool contradiction = false;        // chi != 0
  // true: at least two orbits of opposite parity certified; false: single
  // orbit contradiction; empty: no off-diagonal orbits to certify.
  std::optional<bool> doubling_certificate;
};

/// Builds the graded generator multiset (two circle generators of parity 0
/// and 1, plus one generator per transverse solution with parity given by
/// global_sign * sign) and computes its Euler characteristic.
EulerLedger euler_bookkeeping(const SolveReport& report, int global_sign = 1);

struct DiagonalZero {
  TorusQuadruple quadruple;
  double diagonal_distance = 0.0;
  double residual_norm = 0.0;
  int sign = 0;
};

struct DiagonalPerturbVerdict {
  std::vector<DiagonalZero> zeros;
  int near_diagonal_signed = 0;
  // near-diagonal signed sum plus the report's off-diagonal signed total
  std::optional<int> combined_total;
  bool pass = false;  // exactly two transverse zeros with opposite signs
};

/// Morse-style perturbation of the residual inside the excluded diagonal
/// neighborhood: G_eps = G + eps * bump(d) * n(theta), where n is a unit
/// normal field built from a height function on the diagonal circle with
/// two critical points. Re-solves inside the neighborhood and counts the
/// transverse zeros that appear.
DiagonalPerturbVerdict perturb_diagonal_count(const FourierCurve& curve, const Problem& problem,
                                              double epsilon, const SolveConfig& config,
                                              const SolveReport* report = nullptr);

}  // namespace peg
