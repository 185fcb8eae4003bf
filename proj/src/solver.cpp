#include "peg/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>
#include <unordered_map>

#include <Eigen/SVD>

#include "peg/topology.hpp"

namespace peg {

namespace {

// Both systems share the shape (e1, e2) = (sum a_i g_i, sum b_i g_i) with
// g_i = gamma(t_i); the Jacobian column i is (a_i g_i', b_i g_i').
struct System {
  const FourierCurve* curve;
  std::array<Complex, 4> a{};
  std::array<Complex, 4> b{};

  static System make(const FourierCurve& curve, const Problem& problem) {
    System sys;
    sys.curve = &curve;
    if (const auto* rect = std::get_if<RectangleProblem>(&problem)) {
      const Complex rot = std::polar(1.0, rect->angle());
      sys.a = {1.0, 1.0, -1.0, -1.0};
      sys.b = {1.0, -1.0, -rot, rot};
    } else {
      const QuadData& d = std::get<QuadProblem>(problem).data;
      const Complex rot = std::polar(1.0, d.phi);
      const double ws = std::sqrt(d.s * (1.0 - d.s));
      const double wt = std::sqrt(d.t * (1.0 - d.t));
      sys.a = {1.0 - d.s, d.s, -(1.0 - d.t), -d.t};
      sys.b = {ws * rot, -ws * rot, -wt, wt};
    }
    return sys;
  }

  Eigen::Vector4d value(const TorusQuadruple& q) const {
    Complex e1{0.0, 0.0}, e2{0.0, 0.0};
    for (int i = 0; i < 4; ++i) {
      const Complex g = curve->eval(q[i]);
      e1 += a[static_cast<std::size_t>(i)] * g;
      e2 += b[static_cast<std::size_t>(i)] * g;
    }
    return {e1.real(), e1.imag(), e2.real(), e2.imag()};
  }

  void value_and_jacobian(const TorusQuadruple& q, Eigen::Vector4d& v, Eigen::Matrix4d& j) const {
    Complex e1{0.0, 0.0}, e2{0.0, 0.0};
    for (int i = 0; i < 4; ++i) {
      const auto [g, dg] = curve->eval_with_deriv(q[i]);
      const Complex ai = a[static_cast<std::size_t>(i)], bi = b[static_cast<std::size_t>(i)];
      e1 += ai * g;
      e2 += bi * g;
      const Complex c1 = ai * dg, c2 = bi * dg;
      j(0, i) = c1.real();
      j(1, i) = c1.imag();
      j(2, i) = c2.real();
      j(3, i) = c2.imag();
    }
    v = {e1.real(), e1.imag(), e2.real(), e2.imag()};
  }
};

// Distance from a quadruple to the small diagonal t1=t2=t3=t4.
double diagonal_distance(const TorusQuadruple& q) {
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < 4; ++j) {
    // Unwrap all parameters to representatives near t_j, take their mean.
    const double ref = q[j];
    double mean = 0.0;
    for (int i = 0; i < 4; ++i) {
      double x = q[i];
      while (x - ref > kTwoPi / 2.0) x -= kTwoPi;
      while (ref - x > kTwoPi / 2.0) x += kTwoPi;
      mean += x;
    }
    mean /= 4.0;
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double d = circle_distance(q[i], mean);
      s += d * d;
    }
    best = std::min(best, std::sqrt(s));
  }
  return best;
}

std::optional<TorusQuadruple> newton_from(const System& sys, const TorusQuadruple& seed,
                                          const SolveConfig& config) {
  TorusQuadruple q = seed;
  Eigen::Vector4d g;
  Eigen::Matrix4d j;
  for (int iter = 0; iter < config.newton_max_iters; ++iter) {
    sys.value_and_jacobian(q, g, j);
    const double base = g.norm();
    if (base <= config.newton_tol) return q;

    Eigen::Vector4d step;
    Eigen::FullPivLU<Eigen::Matrix4d> lu(j);
    if (lu.isInvertible()) {
      step = lu.solve(-g);
    } else {
      // Least-squares step; keeps progress on rank-deficient (degenerate) sets.
      step = j.completeOrthogonalDecomposition().solve(-g);
    }
    if (!step.allFinite()) return std::nullopt;

    double alpha = 1.0;
    bool improved = false;
    TorusQuadruple next = q;
    for (int h = 0; h < 20; ++h) {
      next = TorusQuadruple::wrapped(q[0] + alpha * step(0), q[1] + alpha * step(1),
                                     q[2] + alpha * step(2), q[3] + alpha * step(3));
      if (sys.value(next).norm() < base) {
        improved = true;
        break;
      }
      alpha /= 2.0;
    }
    if (!improved) return std::nullopt;  // stalled
    q = next;
  }
  return sys.value(q).norm() <= config.newton_tol ? std::optional<TorusQuadruple>(q)
                                                  : std::nullopt;
}

// Spatial hash over the 4-torus for near-duplicate lookups.
class TorusGrid {
 public:
  explicit TorusGrid(double cell) : cell_(cell), per_axis_(std::max<long>(1, std::lround(std::floor(kTwoPi / cell)))) {}

  void insert(const TorusQuadruple& q, std::size_t index) {
    cells_[key(q)].push_back(index);
  }

  template <typename Store>
  std::optional<std::size_t> find_within(const TorusQuadruple& q, double radius,
                                         const Store& store) const {
    std::array<long, 4> base{};
    for (int i = 0; i < 4; ++i) base[static_cast<std::size_t>(i)] = axis_index(q[i]);
    std::optional<std::size_t> found;
    double best = radius;
    std::array<long, 4> idx{};
    for (long d0 = -1; d0 <= 1; ++d0)
      for (long d1 = -1; d1 <= 1; ++d1)
        for (long d2 = -1; d2 <= 1; ++d2)
          for (long d3 = -1; d3 <= 1; ++d3) {
            idx = {mod(base[0] + d0), mod(base[1] + d1), mod(base[2] + d2), mod(base[3] + d3)};
            auto it = cells_.find(pack(idx));
            if (it == cells_.end()) continue;
            for (std::size_t cand : it->second) {
              const double d = store(cand).distance(q);
              if (d <= best) {
                best = d;
                found = cand;
              }
            }
          }
    return found;
  }

  template <typename Store, typename Fn>
  void for_each_within(const TorusQuadruple& q, double radius, const Store& store,
                       Fn&& fn) const {
    std::array<long, 4> base{};
    for (int i = 0; i < 4; ++i) base[static_cast<std::size_t>(i)] = axis_index(q[i]);
    const long reach = std::max<long>(1, std::lround(std::ceil(radius / cell_)));
    std::array<long, 4> idx{};
    for (long d0 = -reach; d0 <= reach; ++d0)
      for (long d1 = -reach; d1 <= reach; ++d1)
        for (long d2 = -reach; d2 <= reach; ++d2)
          for (long d3 = -reach; d3 <= reach; ++d3) {
            idx = {mod(base[0] + d0), mod(base[1] + d1), mod(base[2] + d2), mod(base[3] + d3)};
            auto it = cells_.find(pack(idx));
            if (it == cells_.end()) continue;
            for (std::size_t cand : it->second)
              if (store(cand).distance(q) <= radius) fn(cand);
          }
  }

 private:
  long axis_index(double t) const {
    long i = static_cast<long>(std::floor(t / cell_));
    return mod(i);
  }
  long mod(long i) const {
    long r = i % per_axis_;
    return r < 0 ? r + per_axis_ : r;
  }
  std::uint64_t key(const TorusQuadruple& q) const {
    std::array<long, 4> idx{};
    for (int i = 0; i < 4; ++i) idx[static_cast<std::size_t>(i)] = axis_index(q[i]);
    return pack(idx);
  }
  std::uint64_t pack(const std::array<long, 4>& idx) const {
    std::uint64_t k = 0;
    for (long v : idx) k = k * 0x10001ull + static_cast<std::uint64_t>(v) + 0x9E37ull;
    return k;
  }

  double cell_;
  long per_axis_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
};

int effective_workers(const SolveConfig& config) {
  if (config.workers > 0) return config.workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

Solution make_solution(const FourierCurve& curve, const Problem& problem,
                       const TorusQuadruple& q, const SolveConfig& config) {
  Solution s;
  s.quadruple = q;
  if (const auto* rect = std::get_if<RectangleProblem>(&problem))
    s.point = point_Lphi(curve, rect->angle(), q[2], q[3]);
  else
    s.point = point_T2(curve, std::get<QuadProblem>(problem).data, q[2], q[3]);
  s.residual_norm = residual(curve, problem, q).norm;
  classify_transversality(curve, problem, s, config);
  if (s.transverse) s.sign = orientation_sign(curve, problem, q);
  return s;
}

}  // namespace

void SolveConfig::validate() const {
  if (grid_per_axis < 2) throw std::invalid_argument("SolveConfig: grid_per_axis must be >= 2");
  if (newton_max_iters <= 0 || newton_tol <= 0.0 || cluster_radius <= 0.0 ||
      diag_exclusion <= 0.0 || sv_ratio_threshold <= 0.0 || degenerate_chain_min <= 0)
    throw std::invalid_argument("SolveConfig: all parameters must be positive");
  if (!(newton_tol < cluster_radius))
    throw std::invalid_argument("SolveConfig: newton_tol must be < cluster_radius");
  if (!(diag_exclusion > cluster_radius))
    throw std::invalid_argument("SolveConfig: diag_exclusion must be > cluster_radius");
  if (workers < 0) throw std::invalid_argument("SolveConfig: workers must be >= 0");
}

std::optional<TorusQuadruple> refine_newton(const FourierCurve& curve, const Problem& problem,
                                            const TorusQuadruple& seed,
                                            const SolveConfig& config) {
  return newton_from(System::make(curve, problem), seed, config);
}

void classify_transversality(const FourierCurve& curve, const Problem& problem,
                             Solution& solution, const SolveConfig& config) {
  const Eigen::Matrix4d j = jacobian(curve, problem, solution.quadruple);
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(j);
  solution.sv_min = svd.singularValues()(3);
  solution.sv_max = svd.singularValues()(0);
  solution.transverse =
      solution.sv_max > 0.0 && solution.sv_min / solution.sv_max >= config.sv_ratio_threshold;
}

DegenerateFamily detect_degenerate_family(const std::vector<Solution>& solutions,
                                          const SolveConfig& config) {
  constexpr std::size_t kMaxStored = 512;
  DegenerateFamily family;

  std::vector<std::size_t> degenerate;
  for (std::size_t i = 0; i < solutions.size(); ++i)
    if (!solutions[i].transverse) degenerate.push_back(i);
  if (degenerate.empty()) return family;

  auto store = [&](std::size_t local) -> const TorusQuadruple& {
    return solutions[degenerate[local]].quadruple;
  };

  // Chain adjacency must scale with the spacing the refinement actually
  // produced along the family, not just the dedup radius: use the median
  // nearest-neighbor distance among the degenerate points.
  double adjacency = 5.0 * config.cluster_radius;
  if (degenerate.size() >= 2) {
    const std::size_t sample_count = std::min<std::size_t>(degenerate.size(), 256);
    const std::size_t stride = degenerate.size() / sample_count;
    std::vector<double> nn;
    nn.reserve(sample_count);
    for (std::size_t i = 0; i < degenerate.size(); i += stride) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < degenerate.size(); ++j)
        if (i != j) best = std::min(best, store(i).distance(store(j)));
      nn.push_back(best);
    }
    std::nth_element(nn.begin(), nn.begin() + static_cast<std::ptrdiff_t>(nn.size() / 2), nn.end());
    adjacency = std::max(adjacency, 3.0 * nn[nn.size() / 2]);
  }
  TorusGrid grid(adjacency);
  for (std::size_t i = 0; i < degenerate.size(); ++i) grid.insert(store(i), i);

  // Union-find over the adjacency graph.
  std::vector<std::size_t> parent(degenerate.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t i = 0; i < degenerate.size(); ++i)
    grid.for_each_within(store(i), adjacency, store, [&](std::size_t j) {
      const std::size_t a = find(i), b = find(j);
      if (a != b) parent[a] = b;
    });

  std::unordered_map<std::size_t, std::vector<std::size_t>> components;
  for (std::size_t i = 0; i < degenerate.size(); ++i) components[find(i)].push_back(i);

  // Largest component wins; the rest of the degenerate points are isolated
  // (or smaller chains, reported the same way).
  std::vector<std::size_t>* largest = nullptr;
  for (auto& [root, comp] : components)
    if (largest == nullptr || comp.size() > largest->size()) largest = &comp;

  if (largest != nullptr &&
      largest->size() >= static_cast<std::size_t>(config.degenerate_chain_min)) {
    family.found = true;
    family.chain_size = largest->size();
    // Order along the chain: greedy nearest-neighbor walk from the
    // lexicographically least member.
    std::vector<std::size_t> comp = *largest;
    std::size_t start = 0;
    for (std::size_t i = 1; i < comp.size(); ++i)
      if (store(comp[i]).lexicographically_less(store(comp[start]))) start = i;
    std::vector<bool> used(comp.size(), false);
    std::vector<std::size_t> ordered;
    ordered.reserve(comp.size());
    std::size_t cur = start;
    used[cur] = true;
    ordered.push_back(comp[cur]);
    for (std::size_t step = 1; step < comp.size(); ++step) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t next = comp.size();
      for (std::size_t i = 0; i < comp.size(); ++i) {
        if (used[i]) continue;
        const double d = store(comp[i]).distance(store(comp[cur]));
        if (d < best) {
          best = d;
          next = i;
        }
      }
      if (next == comp.size()) break;
      used[next] = true;
      ordered.push_back(comp[next]);
      cur = next;
    }
    const std::size_t stride = std::max<std::size_t>(1, ordered.size() / kMaxStored);
    for (std::size_t i = 0; i < ordered.size(); i += stride)
      family.chain.push_back(store(ordered[i]));
    for (auto& [root, comp2] : components) {
      if (&comp2 == largest) continue;
      for (std::size_t i : comp2)
        if (family.isolated.size() < kMaxStored) family.isolated.push_back(store(i));
    }
  } else {
    for (std::size_t i = 0; i < degenerate.size(); ++i)
      if (family.isolated.size() < kMaxStored) family.isolated.push_back(store(i));
  }
  return family;
}

std::vector<PegOrbit> quotient_symmetry(const FourierCurve& curve, const Problem& problem,
                                        std::vector<Solution> solutions,
                                        const SolveConfig& config) {
  const bool use_sigma = has_sigma_symmetry(problem);
  const bool use_tau = has_tau_symmetry(problem);

  std::sort(solutions.begin(), solutions.end(), [](const Solution& a, const Solution& b) {
    return a.quadruple.lexicographically_less(b.quadruple);
  });

  auto orbit_images = [&](const TorusQuadruple& q) {
    std::vector<TorusQuadruple> images;
    if (use_sigma) {
      images = {q, sigma(q), tau(q), sigma(tau(q))};
    } else if (use_tau) {
      images = {q, tau(q)};
    } else {
      images = {q};
    }
    return images;
  };

  const double match_radius = config.cluster_radius;
  auto find_match = [&](const TorusQuadruple& q) -> std::optional<std::size_t> {
    std::optional<std::size_t> best;
    double best_d = match_radius;
    for (std::size_t i = 0; i < solutions.size(); ++i) {
      const double d = solutions[i].quadruple.distance(q);
      if (d <= best_d) {
        best_d = d;
        best = i;
      }
    }
    return best;
  };

  std::vector<PegOrbit> orbits;
  std::vector<bool> assigned(solutions.size(), false);
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    if (assigned[i]) continue;
    PegOrbit orbit;
    for (const TorusQuadruple& image : orbit_images(solutions[i].quadruple)) {
      auto match = find_match(image);
      if (!match) {
        // Symmetry says the partner exists; failure to hold it is a solver
        // defect. Re-seed Newton at the exact symmetric image first.
        auto recovered = refine_newton(curve, problem, image, config);
        if (recovered && recovered->min_pairwise_distance() >= config.diag_exclusion) {
          solutions.push_back(make_solution(curve, problem, *recovered, config));
          assigned.push_back(false);
          match = solutions.size() - 1;
        } else {
          throw OrbitIntegrityError("quotient_symmetry: missing symmetry partner");
        }
      }
      if (assigned[*match]) {
        const bool already_in_orbit =
            std::any_of(orbit.members.begin(), orbit.members.end(), [&](const Solution& m) {
              return m.quadruple.distance(solutions[*match].quadruple) <= match_radius;
            });
        if (!already_in_orbit)
          throw OrbitIntegrityError("quotient_symmetry: orbit of unexpected size");
        continue;
      }
      assigned[*match] = true;
      orbit.members.push_back(solutions[*match]);
    }

    std::sort(orbit.members.begin(), orbit.members.end(),
              [](const Solution& a, const Solution& b) {
                return a.quadruple.lexicographically_less(b.quadruple);
              });
    orbit.representative = 0;

    // tau-related members must carry equal orientation signs.
    for (const Solution& m : orbit.members) {
      if (!m.sign) continue;
      const TorusQuadruple partner = tau(m.quadruple);
      for (const Solution& n : orbit.members)
        if (n.sign && n.quadruple.distance(partner) <= match_radius && *n.sign != *m.sign)
          throw OrbitIntegrityError("quotient_symmetry: tau partners disagree in sign");
    }

    const Solution& rep = orbit.members[orbit.representative];
    orbit.orbit_sign = rep.sign.value_or(0);
    if (const auto* rect = std::get_if<RectangleProblem>(&problem))
      orbit.peg = extract_rectangle(curve, rect->angle(), rep.quadruple);
    else
      orbit.peg = extract_quad(curve, std::get<QuadProblem>(problem).data, rep.quadruple);
    orbits.push_back(std::move(orbit));
  }

  std::sort(orbits.begin(), orbits.end(), [](const PegOrbit& a, const PegOrbit& b) {
    return a.members[a.representative].quadruple.lexicographically_less(
        b.members[b.representative].quadruple);
  });
  return orbits;
}

SolveReport solve(const FourierCurve& curve, const Problem& problem, const SolveConfig& config) {
  const auto t_start = std::chrono::steady_clock::now();
  validate(problem);
  config.validate();
  if (!check_embedded(curve, 256).embedded)
    throw EmbeddingError("solve: curve fails the embedding check");

  const System sys = System::make(curve, problem);
  const int n = config.grid_per_axis;
  const double h = kTwoPi / n;

  // Seed refinement, chunked by the first grid axis; chunk results are
  // merged in order so the outcome is independent of scheduling.
  const int workers = std::min(effective_workers(config), n);
  std::vector<std::vector<TorusQuadruple>> chunk_results(static_cast<std::size_t>(n));
  auto run_axis = [&](int i0) {
    auto& out = chunk_results[static_cast<std::size_t>(i0)];
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2)
        for (int i3 = 0; i3 < n; ++i3) {
          const TorusQuadruple seed =
              TorusQuadruple::wrapped(i0 * h, i1 * h, i2 * h, i3 * h);
          if (diagonal_distance(seed) < config.diag_exclusion) continue;
          auto refined = newton_from(sys, seed, config);
          if (!refined) continue;
          if (refined->min_pairwise_distance() < config.diag_exclusion) continue;
          out.push_back(*refined);
        }
  };
  if (workers <= 1) {
    for (int i0 = 0; i0 < n; ++i0) run_axis(i0);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next_axis{0};
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int i0 = next_axis.fetch_add(1); i0 < n; i0 = next_axis.fetch_add(1)) run_axis(i0);
      });
    for (auto& th : pool) th.join();
  }

  std::vector<TorusQuadruple> converged;
  for (auto& chunk : chunk_results)
    converged.insert(converged.end(), chunk.begin(), chunk.end());

  // Deduplicate: lowest residual wins, ties broken lexicographically.
  std::vector<std::pair<double, TorusQuadruple>> candidates;
  candidates.reserve(converged.size());
  for (const TorusQuadruple& q : converged) candidates.emplace_back(sys.value(q).norm(), q);
  std::sort(candidates.begin(), candidates.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first < b.first;
              return a.second.lexicographically_less(b.second);
            });
  std::vector<TorusQuadruple> accepted;
  {
    TorusGrid grid(config.cluster_radius);
    auto store = [&](std::size_t i) -> const TorusQuadruple& { return accepted[i]; };
    for (const auto& [norm, q] : candidates) {
      if (grid.find_within(q, config.cluster_radius, store)) continue;
      accepted.push_back(q);
      grid.insert(q, accepted.size() - 1);
    }
  }

  SolveReport report;
  report.problem = problem;
  report.config = config;
  report.curve_fingerprint = curve.fingerprint();
  report.raw_solution_count = accepted.size();

  std::vector<Solution> solutions;
  solutions.reserve(accepted.size());
  for (const TorusQuadruple& q : accepted)
    solutions.push_back(make_solution(curve, problem, q, config));

  report.degenerate_family = detect_degenerate_family(solutions, config);
  if (!report.degenerate_family.found) {
    report.orbits = quotient_symmetry(curve, problem, std::move(solutions), config);
    std::size_t member_count = 0;
    bool all_signed = true;
    int total = 0;
    for (const PegOrbit& orbit : report.orbits) {
      member_count += orbit.members.size();
      for (const Solution& m : orbit.members) {
        if (m.sign)
          total += *m.sign;
        else
          all_signed = false;
      }
    }
    report.raw_solution_count = member_count;
    if (all_signed) report.signed_total = total;
    if (report.orbits.empty() && std::holds_alternative<RectangleProblem>(problem))
      report.empty_result_warning = true;
  }

  report.timing_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t_start)
                         .count();
  return report;
}

}  // namespace peg
