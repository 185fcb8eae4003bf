#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace peg {

using Complex = std::complex<double>;

constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Wrap an angle into the canonical range [0, 2*pi).
double wrap_angle(double t);

/// Distance between two angles on the circle, in [0, pi].
double circle_distance(double a, double b);

/// A closed plane curve given as a truncated complex Fourier series,
///   gamma(t) = sum_{k=-m}^{m} c_k e^{ikt},  t in [0, 2*pi).
/// Coefficients are stored in increasing mode order c_{-m} .. c_{m}.
class FourierCurve {
 public:
  FourierCurve(int max_mode, std::vector<Complex> coeffs);

  int max_mode() const { return max_mode_; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  Complex coeff(int k) const;

  /// gamma(t); 2*pi-periodic by construction.
  Complex eval(double t) const;

  /// Term-by-term derivative, order 1 or 2.
  Complex deriv(double t, int order) const;

  /// gamma(t) and gamma'(t) in one pass; the solver hot path.
  std::pair<Complex, Complex> eval_with_deriv(double t) const;

  /// Largest pairwise sample distance; the length scale for tolerances.
  double diameter() const;

  /// FNV-1a hash of the coefficient bytes; identifies the curve in reports.
  std::uint64_t fingerprint() const;

 private:
  int max_mode_;
  std::vector<Complex> coeffs_;
};

/// c_1 = (a+b)/2, c_{-1} = (a-b)/2, so gamma(t) = a cos t + i b sin t.
FourierCurve make_ellipse(double a, double b);

/// Adds seeded pseudo-random complex coefficients of magnitude <= amplitude
/// to all modes |k| <= max_mode, then re-runs the embedding check.
/// The generator is splitmix64 with 53-bit uniform output, fixed here so
/// runs reproduce across platforms.
FourierCurve perturb(const FourierCurve& curve, double amplitude, int max_mode,
                     std::uint64_t seed);

struct EmbeddingVerdict {
  bool embedded = false;
  struct Pair {
    double t1 = 0.0;
    double t2 = 0.0;
    double distance = 0.0;
  };
  // Present iff not embedded or the margin is below the reporting threshold.
  std::optional<Pair> worst_pair;
  int samples_used = 0;
};

/// Sampling + local refinement heuristic for "is this a Jordan curve".
/// Two parameters at circle distance >= 0.1 rad whose points come within
/// 1e-6 * diameter of each other fail the check. A pass is evidence, not
/// proof.
EmbeddingVerdict check_embedded(const FourierCurve& curve, int n_samples);

}  // namespace peg
