#include "peg/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace peg {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// splitmix64; output mapped to [0,1) with 53 bits.
std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double uniform01(std::uint64_t& state) {
  return static_cast<double>(splitmix64_next(state) >> 11) * 0x1.0p-53;
}

}  // namespace

double wrap_angle(double t) {
  double w = std::fmod(t, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

double circle_distance(double a, double b) {
  double d = std::fabs(wrap_angle(a) - wrap_angle(b));
  return std::min(d, kTwoPi - d);
}

FourierCurve::FourierCurve(int max_mode, std::vector<Complex> coeffs)
    : max_mode_(max_mode), coeffs_(std::move(coeffs)) {
  if (max_mode_ < 0) throw std::invalid_argument("FourierCurve: max_mode must be >= 0");
  if (coeffs_.size() != static_cast<std::size_t>(2 * max_mode_ + 1))
    throw std::invalid_argument("FourierCurve: expected 2*max_mode+1 coefficients");
  bool nonconstant = false;
  for (int k = -max_mode_; k <= max_mode_; ++k) {
    if (!finite(coeff(k))) throw std::invalid_argument("FourierCurve: non-finite coefficient");
    if (k != 0 && coeff(k) != Complex(0.0, 0.0)) nonconstant = true;
  }
  if (!nonconstant)
    throw std::invalid_argument("FourierCurve: needs a nonzero coefficient with k != 0");
}

Complex FourierCurve::coeff(int k) const {
  if (k < -max_mode_ || k > max_mode_) return {0.0, 0.0};
  return coeffs_[static_cast<std::size_t>(k + max_mode_)];
}

Complex FourierCurve::eval(double t) const {
  const Complex w = std::polar(1.0, t);
  const Complex winv = std::conj(w);
  Complex z = coeff(0);
  Complex wp{1.0, 0.0}, wn{1.0, 0.0};
  for (int k = 1; k <= max_mode_; ++k) {
    wp *= w;
    wn *= winv;
    z += coeff(k) * wp + coeff(-k) * wn;
  }
  return z;
}

Complex FourierCurve::deriv(double t, int order) const {
  if (order != 1 && order != 2) throw std::invalid_argument("FourierCurve::deriv: order must be 1 or 2");
  const Complex w = std::polar(1.0, t);
  const Complex winv = std::conj(w);
  Complex z{0.0, 0.0};
  Complex wp{1.0, 0.0}, wn{1.0, 0.0};
  for (int k = 1; k <= max_mode_; ++k) {
    wp *= w;
    wn *= winv;
    const Complex ikp = (order == 1) ? Complex(0.0, k) : Complex(-double(k) * k, 0.0);
    const Complex ikn = (order == 1) ? Complex(0.0, -k) : Complex(-double(k) * k, 0.0);
    z += ikp * coeff(k) * wp + ikn * coeff(-k) * wn;
  }
  return z;
}

std::pair<Complex, Complex> FourierCurve::eval_with_deriv(double t) const {
  const Complex w = std::polar(1.0, t);
  const Complex winv = std::conj(w);
  Complex z = coeff(0);
  Complex dz{0.0, 0.0};
  Complex wp{1.0, 0.0}, wn{1.0, 0.0};
  for (int k = 1; k <= max_mode_; ++k) {
    wp *= w;
    wn *= winv;
    const Complex a = coeff(k) * wp;
    const Complex b = coeff(-k) * wn;
    z += a + b;
    dz += Complex(0.0, k) * a + Complex(0.0, -k) * b;
  }
  return {z, dz};
}

double FourierCurve::diameter() const {
  constexpr int n = 256;
  std::vector<Complex> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = eval(kTwoPi * i / n);
  double d = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) d = std::max(d, std::abs(pts[i] - pts[j]));
  return d;
}

std::uint64_t FourierCurve::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 0x100000001b3ull;
    }
  };
  mix(&max_mode_, sizeof(max_mode_));
  for (const Complex& c : coeffs_) {
    double re = c.real(), im = c.imag();
    mix(&re, sizeof(re));
    mix(&im, sizeof(im));
  }
  return h;
}

FourierCurve make_ellipse(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("make_ellipse: axes must be positive");
  std::vector<Complex> c(3, Complex{0.0, 0.0});
  c[0] = Complex((a - b) / 2.0, 0.0);  // c_{-1}
  c[2] = Complex((a + b) / 2.0, 0.0);  // c_{+1}
  return FourierCurve(1, std::move(c));
}

FourierCurve perturb(const FourierCurve& curve, double amplitude, int max_mode,
                     std::uint64_t seed) {
  if (amplitude < 0.0) throw std::invalid_argument("perturb: amplitude must be >= 0");
  if (max_mode < 0) throw std::invalid_argument("perturb: max_mode must be >= 0");
  if (amplitude == 0.0) return curve;

  const int m = std::max(curve.max_mode(), max_mode);
  std::vector<Complex> c(static_cast<std::size_t>(2 * m + 1));
  for (int k = -m; k <= m; ++k) c[static_cast<std::size_t>(k + m)] = curve.coeff(k);

  std::uint64_t state = seed;
  for (int k = -max_mode; k <= max_mode; ++k) {
    const double r = amplitude * uniform01(state);
    const double theta = kTwoPi * uniform01(state);
    c[static_cast<std::size_t>(k + m)] += std::polar(r, theta);
  }
  FourierCurve out(m, std::move(c));
  if (!check_embedded(out, 512).embedded)
    throw std::runtime_error("perturb: perturbed curve fails the embedding check");
  return out;
}

EmbeddingVerdict check_embedded(const FourierCurve& curve, int n_samples) {
  if (n_samples < 64) throw std::invalid_argument("check_embedded: n_samples must be >= 64");
  constexpr double kDeltaEmb = 0.1;  // rad; pairs closer than this on the circle are skipped
  const double diam = curve.diameter();
  const double tol = 1e-6 * diam;
  const double report_threshold = 1e-3 * diam;

  std::vector<double> ts(static_cast<std::size_t>(n_samples));
  std::vector<Complex> pts(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    ts[i] = kTwoPi * i / n_samples;
    pts[i] = curve.eval(ts[i]);
  }

  // Refine a candidate pair by damped Newton on gamma(u) - gamma(v) = 0,
  // i.e. Gauss-Newton on the squared distance.
  auto refine = [&curve](double u, double v) {
    for (int it = 0; it < 40; ++it) {
      auto [pu, du] = curve.eval_with_deriv(u);
      auto [pv, dv] = curve.eval_with_deriv(v);
      const Complex f = pu - pv;
      // Solve [du, -dv] * (su, sv)^T = -f as a real 2x2 system.
      const double a = du.real(), b = -dv.real(), c = du.imag(), d = -dv.imag();
      const double det = a * d - b * c;
      if (std::fabs(det) < 1e-14) break;
      const double su = (-f.real() * d + f.imag() * b) / det;
      const double sv = (-f.imag() * a + f.real() * c) / det;
      double alpha = 1.0;
      const double base = std::abs(f);
      double nu = u, nv = v;
      for (int h = 0; h < 16; ++h) {
        nu = u + alpha * su;
        nv = v + alpha * sv;
        if (std::abs(curve.eval(nu) - curve.eval(nv)) < base) break;
        alpha /= 2.0;
      }
      if (std::abs(curve.eval(nu) - curve.eval(nv)) >= base) break;
      u = nu;
      v = nv;
    }
    return std::tuple<double, double, double>(wrap_angle(u), wrap_angle(v),
                                              std::abs(curve.eval(u) - curve.eval(v)));
  };

  EmbeddingVerdict verdict;
  verdict.samples_used = n_samples;

  // Coarse pass: the smallest sample distance among well-separated pairs.
  double d0min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_samples; ++i) {
    for (int j = i + 1; j < n_samples; ++j) {
      if (circle_distance(ts[i], ts[j]) < kDeltaEmb) continue;
      d0min = std::min(d0min, std::abs(pts[i] - pts[j]));
    }
  }

  // Refine every pair that could plausibly beat the coarse minimum.
  const double refine_cutoff = std::max(report_threshold, 2.0 * d0min);
  double best = std::numeric_limits<double>::infinity();
  EmbeddingVerdict::Pair best_pair;
  for (int i = 0; i < n_samples; ++i) {
    for (int j = i + 1; j < n_samples; ++j) {
      if (circle_distance(ts[i], ts[j]) < kDeltaEmb) continue;
      const double d0 = std::abs(pts[i] - pts[j]);
      if (d0 > refine_cutoff) continue;
      auto [u, v, d] = refine(ts[i], ts[j]);
      if (circle_distance(u, v) < kDeltaEmb / 2.0) continue;  // collapsed toward the diagonal
      if (d < best) {
        best = d;
        best_pair = {u, v, d};
      }
    }
  }
  verdict.embedded = !(best < tol);
  if (!verdict.embedded || best < report_threshold) verdict.worst_pair = best_pair;
  return verdict;
}

}  // namespace peg
