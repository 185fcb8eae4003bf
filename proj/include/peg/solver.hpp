#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "peg/residual.hpp"

namespace peg {

/// Thrown when the input curve fails the embedding check (CLI exit 2).
struct EmbeddingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when a symmetry orbit cannot be completed (CLI exit 3).
struct OrbitIntegrityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolveConfig {
  int grid_per_axis = 24;
  int newton_max_iters = 50;
  double newton_tol = 1e-11;        // residual-norm acceptance
  double cluster_radius = 1e-4;     // torus distance merging duplicates
  double diag_exclusion = 0.05;     // rad; margin kept from the small diagonal
  double sv_ratio_threshold = 1e-6; // transversality cutoff sigma_min/sigma_max
  int degenerate_chain_min = 12;
  int workers = 0;                  // 0 = hardware concurrency

  void validate() const;
};

/// A refined zero of the residual system away from the small diagonal.
struct Solution {
  TorusQuadruple quadruple;
  ComplexPair point;          // the ambient intersection point
  double residual_norm = 0.0;
  double sv_min = 0.0;
  double sv_max = 0.0;
  bool transverse = false;
  std::optional<int> sign;    // -1 or +1; empty when degenerate
};

/// A symmetry orbit of solutions with the peg it represents.
struct PegOrbit {
  std::vector<Solution> members;  // size 2 (C2), 4 (C4), or 1 (generic quad)
  Peg peg;
  int orbit_sign = 0;             // sign of the canonical representative
  std::size_t representative = 0; // index into members, lexicographically least
};

struct DegenerateFamily {
  bool found = false;
  // Non-transverse solutions forming the chain, ordered along it.
  // Downsampled to at most max_stored points when large.
  std::vector<TorusQuadruple> chain;
  std::size_t chain_size = 0;     // before downsampling
  std::vector<TorusQuadruple> isolated;  // degeneracies not in any chain
};

struct SolveReport {
  Problem problem;
  std::vector<PegOrbit> orbits;
  std::size_t raw_solution_count = 0;
  std::optional<int> signed_total;  // empty when degenerate
  DegenerateFamily degenerate_family;
  SolveConfig config;
  std::uint64_t curve_fingerprint = 0;
  double timing_ms = 0.0;
  // Set for rectangle problems that found nothing: existence is guaranteed,
  // so an empty result is a search failure warning, not a proof of absence.
  bool empty_result_warning = false;
};

/// One damped Newton refinement with torus wrap-around. Returns the refined
/// quadruple when the residual norm reaches config.newton_tol.
std::optional<TorusQuadruple> refine_newton(const FourierCurve& curve, const Problem& problem,
                                            const TorusQuadruple& seed,
                                            const SolveConfig& config);

/// Computes singular values of the Jacobian at the solution and sets the
/// transversality verdict.
void classify_transversality(const FourierCurve& curve, const Problem& problem,
                             Solution& solution, const SolveConfig& config);

/// Groups deduplicated solutions into symmetry orbits (C2, C4, or trivial).
/// Re-seeds Newton at the symmetric image of any missing partner before
/// failing with OrbitIntegrityError.
std::vector<PegOrbit> quotient_symmetry(const FourierCurve& curve, const Problem& problem,
                                        std::vector<Solution> solutions,
                                        const SolveConfig& config);

/// Reports a degenerate family when at least degenerate_chain_min
/// non-transverse solutions chain together under cluster-radius-scaled
/// adjacency.
DegenerateFamily detect_degenerate_family(const std::vector<Solution>& solutions,
                                          const SolveConfig& config);

/// Grid-seeded damped-Newton search for all zeros of the residual system
/// away from the small diagonal, with deduplication, transversality
/// classification, orientation signs, and the symmetry quotient.
/// Deterministic for fixed inputs.
SolveReport solve(const FourierCurve& curve, const Problem& problem, const SolveConfig& config);

}  // namespace peg
