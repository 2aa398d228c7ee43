#include "cspace/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cspace/concept.hpp"
#include "cspace/error.hpp"

namespace cspace {

Point clamp_to_cuboid(Coords x, const Cuboid& box) {
  Point out(x.begin(), x.end());
  for (std::size_t d = 0; d < out.size(); ++d) {
    out[d] = std::min(std::max(out[d], box.lower(d)), box.upper(d));
  }
  return out;
}

double distance_to_cuboid(Coords x, const Cuboid& box, const Weights& weights) {
  for (DomainId id : box.domains()) {
    if (!weights.covers(id)) {
      throw LookupError("weights do not cover domain '" + weights.space()->domain(id).name +
                        "' of the cuboid");
    }
  }
  const SpaceSpec& sp = *weights.space();
  double total = 0.0;
  for (DomainId id : weights.domains()) {
    double sum = 0.0;
    for (std::size_t d : sp.dimensions_of(id)) {
      const double nearest = std::min(std::max(x[d], box.lower(d)), box.upper(d));
      const double diff = x[d] - nearest;
      sum += weights.dimension_weight(d) * diff * diff;
    }
    total += weights.domain_weight(id) * std::sqrt(sum);
  }
  return total;
}

Cuboid alpha_cut_bbox(const Cuboid& box, double mu0, double c, const Weights& weights,
                      double alpha) {
  if (!(mu0 > 0.0 && mu0 <= 1.0)) throw ValidationError("mu0 must lie in (0, 1]");
  if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("c must be positive");
  if (!(alpha > 0.0)) throw ValidationError("alpha must be positive");
  if (alpha > mu0 * (1.0 + 1e-12)) {
    throw ValidationError("alpha exceeds mu0; the alpha-cut is empty");
  }
  const double radius = std::max(0.0, std::log(mu0 / alpha) / c);
  const SpaceSpec& sp = *box.space();
  Point lower = box.lower();
  Point upper = box.upper();
  for (std::size_t d = 0; d < lower.size(); ++d) {
    if (!box.bounded(d)) continue;
    const DomainId id = sp.domain_of_dimension(d);
    if (!weights.covers(id)) {
      throw LookupError("weights do not cover domain '" + sp.domain(id).name + "'");
    }
    const double reach =
        radius / (weights.domain_weight(id) * std::sqrt(weights.dimension_weight(d)));
    lower[d] -= reach;
    upper[d] += reach;
  }
  return Cuboid(box.space(), box.domains(), std::move(lower), std::move(upper));
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One side of the min-max: c * d(x, box) - ln mu0, plus its subgradient with respect
// to the free coordinates.
double branch(const Concept& k, const Cuboid& box, Coords x, std::span<const std::size_t> free,
              std::span<double> grad) {
  const Weights& w = k.weights();
  const SpaceSpec& sp = *w.space();
  std::fill(grad.begin(), grad.end(), 0.0);
  double total = 0.0;
  for (DomainId id : w.domains()) {
    double sum = 0.0;
    for (std::size_t d : sp.dimensions_of(id)) {
      const double diff = x[d] - std::min(std::max(x[d], box.lower(d)), box.upper(d));
      sum += w.dimension_weight(d) * diff * diff;
    }
    const double dist = std::sqrt(sum);
    total += w.domain_weight(id) * dist;
    if (dist == 0.0) continue;
    for (std::size_t i = 0; i < free.size(); ++i) {
      const std::size_t d = free[i];
      if (sp.domain_of_dimension(d) != id) continue;
      const double diff = x[d] - std::min(std::max(x[d], box.lower(d)), box.upper(d));
      grad[i] += k.c() * w.domain_weight(id) * w.dimension_weight(d) * diff / dist;
    }
  }
  return k.c() * total - std::log(k.mu0());
}

struct PairSolution {
  Point witness;
  double objective = kInf;
  std::size_t iterations = 0;
  bool converged = false;
  double gap = kInf;
};

// Minimizes max(branch_a, branch_b) for one cuboid pair. Where the two boxes overlap
// on a dimension, any overlap point zeroes both residuals, so only gap dimensions are
// free; on those the optimum lies between the facing bounds.
PairSolution solve_pair(const Concept& a, const Cuboid& ca, const Concept& b, const Cuboid& cb,
                        const SolverOptions& options) {
  const std::size_t n = ca.lower().size();
  Point x(n, 0.0);
  std::vector<std::size_t> free;
  std::vector<double> lo, hi;
  for (std::size_t d = 0; d < n; ++d) {
    const double overlap_lo = std::max(ca.lower(d), cb.lower(d));
    const double overlap_hi = std::min(ca.upper(d), cb.upper(d));
    if (overlap_lo <= overlap_hi) {
      x[d] = std::isfinite(overlap_lo) ? 0.5 * (overlap_lo + overlap_hi) : 0.0;
      continue;
    }
    free.push_back(d);
    if (ca.upper(d) < cb.lower(d)) {
      lo.push_back(ca.upper(d));
      hi.push_back(cb.lower(d));
    } else {
      lo.push_back(cb.upper(d));
      hi.push_back(ca.lower(d));
    }
    x[d] = 0.5 * (lo.back() + hi.back());
  }

  const std::size_t k = free.size();
  std::vector<double> ga(k), gb(k), g(k);
  auto evaluate = [&](Coords at) {
    const double fa = branch(a, ca, at, free, ga);
    const double fb = branch(b, cb, at, free, gb);
    g = fa >= fb ? ga : gb;
    return std::max(fa, fb);
  };

  PairSolution sol;
  sol.witness = x;
  sol.objective = evaluate(x);
  if (k == 0) {
    sol.converged = true;
    sol.gap = 0.0;
    return sol;
  }

  // Ellipsoid {z : (z - x)^T P^{-1} (z - x) <= 1}, initially enclosing the gap box.
  std::vector<double> P(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    const double half = 0.5 * (hi[i] - lo[i]);
    P[i * k + i] = static_cast<double>(k) * half * half;
  }
  std::vector<double> Pg(k);
  double lower_bound = -kInf;
  const double kd = static_cast<double>(k);

  double f = sol.objective;
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    sol.iterations = it + 1;

    std::size_t violated = k;
    double worst = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double v = std::max(lo[i] - x[free[i]], x[free[i]] - hi[i]);
      if (v > worst) {
        worst = v;
        violated = i;
      }
    }
    if (violated < k) {
      std::fill(g.begin(), g.end(), 0.0);
      g[violated] = x[free[violated]] > hi[violated] ? 1.0 : -1.0;
    } else {
      f = evaluate(x);
      if (f < sol.objective) {
        sol.objective = f;
        sol.witness = x;
      }
    }

    for (std::size_t i = 0; i < k; ++i) {
      Pg[i] = std::inner_product(g.begin(), g.end(), P.begin() + i * k, 0.0);
    }
    const double gPg = std::inner_product(g.begin(), g.end(), Pg.begin(), 0.0);
    if (!(gPg > 0.0) || !std::isfinite(gPg)) {
      // Zero subgradient at a feasible point is optimal; otherwise the ellipsoid collapsed.
      const bool stationary = std::all_of(g.begin(), g.end(), [](double v) { return v == 0.0; });
      if (violated == k && stationary) lower_bound = std::max(lower_bound, f);
      break;
    }
    const double root = std::sqrt(gPg);
    if (violated == k) {
      lower_bound = std::max(lower_bound, f - root);
      if (sol.objective - lower_bound <= options.tolerance) break;
    }

    for (std::size_t i = 0; i < k; ++i) x[free[i]] -= Pg[i] / (root * (kd + 1.0));
    if (k == 1) {
      P[0] *= 0.25;
    } else {
      const double scale = kd * kd / (kd * kd - 1.0);
      const double shrink = 2.0 / ((kd + 1.0) * gPg);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
          const double v = scale * (P[i * k + j] - shrink * Pg[i] * Pg[j]);
          P[i * k + j] = v;
          P[j * k + i] = v;
        }
      }
    }
  }

  sol.gap = sol.objective - lower_bound;
  sol.converged = sol.gap <= options.tolerance;
  return sol;
}

bool same_space_or_throw(const Concept& a, const Concept& b) {
  if (!same_space(a.space(), b.space())) {
    throw ValidationError("concepts live in different spaces");
  }
  return true;
}

double min_membership(const Concept& a, const Concept& b, Coords x) {
  return std::min(membership(a, x), membership(b, x));
}

// Midpoint of the two cuboid centers, falling back to whichever is bounded.
Point center_midpoint(const Cuboid& ca, const Cuboid& cb) {
  const std::size_t n = ca.lower().size();
  Point x(n, 0.0);
  for (std::size_t d = 0; d < n; ++d) {
    const bool ba = ca.bounded(d);
    const bool bb = cb.bounded(d);
    const double ma = ba ? 0.5 * (ca.lower(d) + ca.upper(d)) : 0.0;
    const double mb = bb ? 0.5 * (cb.lower(d) + cb.upper(d)) : 0.0;
    if (ba && bb) {
      x[d] = 0.5 * (ma + mb);
    } else if (ba) {
      x[d] = ma;
    } else if (bb) {
      x[d] = mb;
    }
  }
  return x;
}

}  // namespace

OptimResult height_of_intersection(const Concept& a, const Concept& b,
                                   const SolverOptions& options) {
  same_space_or_throw(a, b);
  if (!(options.tolerance > 0.0)) throw ValidationError("solver tolerance must be positive");

  for (const Cuboid& ca : a.core().cuboids()) {
    for (const Cuboid& cb : b.core().cuboids()) {
      if (auto shared = cuboid_intersect(ca, cb)) {
        OptimResult r;
        r.value = std::min(a.mu0(), b.mu0());
        r.witness = shared->center();
        r.converged = true;
        return r;
      }
    }
  }

  OptimResult best;
  best.value = -1.0;
  best.converged = true;
  best.gap = 0.0;
  auto consider = [&](Point x) {
    const double v = min_membership(a, b, x);
    if (v > best.value) {
      best.value = v;
      best.witness = std::move(x);
    }
  };

  for (const Cuboid& ca : a.core().cuboids()) {
    for (const Cuboid& cb : b.core().cuboids()) {
      consider(center_midpoint(ca, cb));
      PairSolution sol = solve_pair(a, ca, b, cb, options);
      best.iterations += sol.iterations;
      best.converged = best.converged && sol.converged;
      best.gap = std::max(best.gap, sol.gap);
      consider(std::move(sol.witness));
    }
  }
  return best;
}

Box oracle_bounds(const Concept& a, const Concept& b) {
  same_space_or_throw(a, b);
  const std::size_t n = a.space()->dimension_count();
  Box box{Point(n, kInf), Point(n, -kInf)};
  for (const Concept* k : {&a, &b}) {
    for (const Cuboid& c : k->core().cuboids()) {
      for (std::size_t d = 0; d < n; ++d) {
        if (!c.bounded(d)) continue;
        box.lower[d] = std::min(box.lower[d], c.lower(d));
        box.upper[d] = std::max(box.upper[d], c.upper(d));
      }
    }
  }
  const double margin = 3.0 * std::max(1.0 / a.c(), 1.0 / b.c());
  for (std::size_t d = 0; d < n; ++d) {
    if (box.lower[d] > box.upper[d]) {
      box.lower[d] = box.upper[d] = 0.0;
    } else {
      box.lower[d] -= margin;
      box.upper[d] += margin;
    }
  }
  return box;
}

namespace {

struct Lattice {
  std::vector<std::size_t> counts;
  std::vector<double> steps;
  std::size_t total = 1;
};

Lattice make_lattice(const Box& bounds, std::span<const double> steps, std::size_t max_points) {
  Lattice lat;
  const std::size_t n = bounds.lower.size();
  lat.counts.resize(n);
  lat.steps.assign(steps.begin(), steps.end());
  for (std::size_t d = 0; d < n; ++d) {
    const double width = bounds.upper[d] - bounds.lower[d];
    if (!(width >= 0.0) || !std::isfinite(width)) {
      throw ValidationError("lattice bounds must be finite with lower <= upper");
    }
    const double count = width == 0.0 ? 1.0 : std::floor(width / steps[d] + 1e-9) + 1.0;
    if (count > static_cast<double>(max_points) ||
        static_cast<double>(lat.total) * count > static_cast<double>(max_points)) {
      throw NumericError("lattice exceeds the cap of " + std::to_string(max_points) + " points");
    }
    lat.counts[d] = static_cast<std::size_t>(count);
    lat.total *= lat.counts[d];
  }
  return lat;
}

// Evaluates every lattice point; returns values in row-major order (last dimension
// fastest).
std::vector<double> scan(const Concept& a, const Concept& b, const Box& bounds,
                         const Lattice& lat) {
  const std::size_t n = bounds.lower.size();
  std::vector<double> values(lat.total);
  std::vector<std::size_t> idx(n, 0);
  Point x = bounds.lower;
  for (std::size_t flat = 0; flat < lat.total; ++flat) {
    values[flat] = min_membership(a, b, x);
    for (std::size_t d = n; d-- > 0;) {
      if (++idx[d] < lat.counts[d]) {
        x[d] = bounds.lower[d] + static_cast<double>(idx[d]) * lat.steps[d];
        break;
      }
      idx[d] = 0;
      x[d] = bounds.lower[d];
    }
  }
  return values;
}

std::vector<std::size_t> unflatten(std::size_t flat, const Lattice& lat) {
  std::vector<std::size_t> idx(lat.counts.size());
  for (std::size_t d = lat.counts.size(); d-- > 0;) {
    idx[d] = flat % lat.counts[d];
    flat /= lat.counts[d];
  }
  return idx;
}

Point lattice_point(const Box& bounds, const Lattice& lat, std::span<const std::size_t> idx) {
  Point x = bounds.lower;
  for (std::size_t d = 0; d < x.size(); ++d) {
    x[d] += static_cast<double>(idx[d]) * lat.steps[d];
  }
  return x;
}

}  // namespace

GridResult grid_oracle_max_min(const Concept& a, const Concept& b, const Box& bounds, double step,
                               std::size_t max_points) {
  same_space_or_throw(a, b);
  if (!(step > 0.0)) throw ValidationError("lattice step must be positive");
  const std::size_t n = a.space()->dimension_count();
  if (bounds.lower.size() != n || bounds.upper.size() != n) {
    throw ValidationError("lattice bounds must cover every dimension");
  }
  const std::vector<double> steps(n, step);
  const Lattice lat = make_lattice(bounds, steps, max_points);
  const std::vector<double> values = scan(a, b, bounds, lat);
  const auto best = static_cast<std::size_t>(
      std::distance(values.begin(), std::max_element(values.begin(), values.end())));
  return {values[best], lattice_point(bounds, lat, unflatten(best, lat)), lat.total};
}

GridResult refined_grid_oracle_max_min(const Concept& a, const Concept& b, const Box& bounds,
                                       double final_step, std::size_t points_per_dim,
                                       std::size_t keep) {
  same_space_or_throw(a, b);
  if (!(final_step > 0.0)) throw ValidationError("lattice step must be positive");
  if (points_per_dim < 2 || keep == 0) throw ValidationError("invalid refinement settings");
  const std::size_t n = a.space()->dimension_count();
  if (bounds.lower.size() != n || bounds.upper.size() != n) {
    throw ValidationError("lattice bounds must cover every dimension");
  }
  constexpr std::size_t kCap = 50'000'000;

  std::vector<double> steps(n);
  for (std::size_t d = 0; d < n; ++d) {
    const double width = bounds.upper[d] - bounds.lower[d];
    steps[d] = width > 0.0 ? width / static_cast<double>(points_per_dim - 1) : 1.0;
  }
  const Lattice lat = make_lattice(bounds, steps, kCap);
  const std::vector<double> values = scan(a, b, bounds, lat);

  GridResult result;
  result.evaluated = lat.total;

  // Best lattice points that are pairwise non-adjacent, to seed separate modes.
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return values[l] > values[r]; });
  std::vector<std::vector<std::size_t>> picked;
  for (std::size_t flat : order) {
    if (picked.size() >= keep) break;
    auto idx = unflatten(flat, lat);
    const bool adjacent = std::any_of(picked.begin(), picked.end(), [&](const auto& other) {
      for (std::size_t d = 0; d < n; ++d) {
        const auto diff = idx[d] > other[d] ? idx[d] - other[d] : other[d] - idx[d];
        if (diff > 1) return false;
      }
      return true;
    });
    if (!adjacent) picked.push_back(std::move(idx));
  }

  std::vector<Point> candidates;
  for (const auto& idx : picked) candidates.push_back(lattice_point(bounds, lat, idx));
  result.value = values[order.front()];
  result.witness = candidates.front();

  while (true) {
    double coarsest = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
      if (bounds.upper[d] > bounds.lower[d]) coarsest = std::max(coarsest, steps[d]);
    }
    if (coarsest <= final_step) break;
    std::vector<double> finer(n);
    for (std::size_t d = 0; d < n; ++d) finer[d] = steps[d] / 4.0;
    for (Point& center : candidates) {
      Box local{center, center};
      for (std::size_t d = 0; d < n; ++d) {
        if (bounds.upper[d] == bounds.lower[d]) continue;
        local.lower[d] = std::max(bounds.lower[d], center[d] - 2.0 * steps[d]);
        local.upper[d] = std::min(bounds.upper[d], center[d] + 2.0 * steps[d]);
      }
      const Lattice sub = make_lattice(local, finer, kCap);
      const std::vector<double> vals = scan(a, b, local, sub);
      result.evaluated += sub.total;
      const auto best = static_cast<std::size_t>(
          std::distance(vals.begin(), std::max_element(vals.begin(), vals.end())));
      center = lattice_point(local, sub, unflatten(best, sub));
      if (vals[best] > result.value) {
        result.value = vals[best];
        result.witness = center;
      }
    }
    steps = finer;
  }
  return result;
}

}  // namespace cspace
