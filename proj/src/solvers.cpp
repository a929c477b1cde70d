#include "wpgibbs/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>
#include <omp.h>

namespace wpgibbs {

namespace {

using mat4 = Eigen::Matrix4d;
using vec4 = Eigen::Vector4d;

mat4 fixed_point_jacobian(const field_quad& h, const model_params& params) {
  const auto dw = w_jacobian(h, params);
  mat4 j = mat4::Identity();
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) j(r, c) -= dw[r][c];
  return j;
}

double halton(int index, int base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

field_quad canonical_zero(field_quad h) {
  for (double& x : h) x += 0.0;  // -0.0 -> +0.0
  return h;
}

std::vector<field_quad> run_start(const std::vector<field_quad>& seeds, std::size_t i,
                                  const model_params& params, const solve_options& opts);

full_solve_result merge_candidates(const model_params& params, const solve_options& opts,
                                   const std::vector<std::vector<field_quad>>& slots) {
  full_solve_result out;
  out.starts = static_cast<int>(slots.size());
  std::vector<field_quad> candidates;
  for (const auto& slot : slots) {
    if (slot.empty()) ++out.dropped_starts;
    for (const auto& h : slot) {
      // W commutes with negation and with the coset swap, so the images are fixed points too.
      for (const auto& img : {h, negate(h), swap_cosets(h), negate(swap_cosets(h))}) {
        // Points next to the origin are the zero field, which is added exactly below.
        if (max_norm_distance(img, field_quad{}) <= opts.dedup_tol) continue;
        if (fixed_point_residual(img, params) < opts.tol) candidates.push_back(canonical_zero(img));
      }
    }
  }
  // h = 0 always solves the system.
  candidates.push_back(field_quad{0.0, 0.0, 0.0, 0.0});

  const auto unique = dedup_fields(std::move(candidates), opts.dedup_tol);
  for (const auto& h : unique) {
    out.records.push_back(make_record(params, h, opts.tol, solution_source::full_solve, opts.classify_tol));
  }

  auto present = [&](const field_quad& h) {
    return std::any_of(unique.begin(), unique.end(),
                       [&](const field_quad& g) { return max_norm_distance(g, h) <= opts.dedup_tol; });
  };
  out.symmetry_closed = std::all_of(unique.begin(), unique.end(), [&](const field_quad& h) {
    return present(negate(h)) && present(swap_cosets(h));
  });
  return out;
}

std::vector<field_quad> run_start(const std::vector<field_quad>& seeds, std::size_t i,
                                  const model_params& params, const solve_options& opts) {
  std::vector<field_quad> found;
  const auto& seed = seeds[i];
  // The damped phase lands on attracting points; Newton from the raw seed also reaches saddles.
  field_quad h = seed;
  bool near = false;
  for (int it = 0; it < opts.max_damped_iter; ++it) {
    const field_quad w = w_map(h, params);
    if (max_norm_distance(h, w) < opts.newton_switch) {
      near = true;
      break;
    }
    for (int c = 0; c < 4; ++c) h[c] += opts.damping * (w[c] - h[c]);
  }
  if (near) {
    if (auto p = newton_polish(h, params, opts.tol, opts.max_newton_iter)) found.push_back(*p);
  }
  if (auto p = newton_polish(seed, params, opts.tol, opts.max_newton_iter)) found.push_back(*p);
  return found;
}

std::vector<solution_record> filter_set(std::vector<solution_record> records, invariant_set s) {
  std::erase_if(records, [s](const solution_record& r) { return !in_set(r.flags, s); });
  return records;
}

bool reduction_path(int k, int a_size, const scan_options& opts) {
  return opts.use_i3_reduction && a_size == k && opts.restrict_to == invariant_set::i3;
}

std::vector<double> alpha_grid(double lo, double hi, int steps) {
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("scan needs 0 < alpha_lo < alpha_hi");
  if (steps < 2) throw std::invalid_argument("scan needs at least two grid points");
  std::vector<double> grid(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (steps - 1);
  grid.back() = hi;
  return grid;
}

void refine_transition(int k, int a_size, double lo, std::vector<solution_record> sol_lo, double hi,
                       std::vector<solution_record> sol_hi, const scan_options& opts,
                       std::vector<count_transition>& out) {
  const int c_lo = static_cast<int>(sol_lo.size());
  const int c_hi = static_cast<int>(sol_hi.size());
  if (hi - lo <= opts.bifurcation_width) {
    out.push_back({lo, hi, c_lo, c_hi, tangency_count(sol_lo, sol_hi, opts.restrict_to)});
    return;
  }
  const double mid = lo + 0.5 * (hi - lo);
  auto sol_mid = scan_solutions(k, a_size, mid, opts);
  const int c_mid = static_cast<int>(sol_mid.size());
  if (c_mid == c_lo) {
    refine_transition(k, a_size, mid, std::move(sol_mid), hi, std::move(sol_hi), opts, out);
  } else if (c_mid == c_hi) {
    refine_transition(k, a_size, lo, std::move(sol_lo), mid, std::move(sol_mid), opts, out);
  } else {
    refine_transition(k, a_size, lo, std::move(sol_lo), mid, sol_mid, opts, out);
    refine_transition(k, a_size, mid, std::move(sol_mid), hi, std::move(sol_hi), opts, out);
  }
}

std::vector<count_transition> refine_bracket(int k, int a_size, const scan_point& a, const scan_point& b,
                                             const scan_options& opts) {
  std::vector<count_transition> out;
  try {
    refine_transition(k, a_size, a.alpha, a.solutions, b.alpha, b.solutions, opts, out);
  } catch (const std::exception&) {
    // A failed solve inside the bracket leaves it unrefined.
    out.clear();
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> changed_brackets(const std::vector<scan_point>& pts) {
  std::vector<std::pair<std::size_t, std::size_t>> brackets;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i].count >= 0 && pts[i + 1].count >= 0 && pts[i].count != pts[i + 1].count) {
      brackets.emplace_back(i, i + 1);
    }
  }
  return brackets;
}

scan_point scan_one(int k, int a_size, double alpha, const scan_options& opts) {
  scan_point p;
  p.alpha = alpha;
  try {
    p.solutions = scan_solutions(k, a_size, alpha, opts);
    p.count = static_cast<int>(p.solutions.size());
  } catch (const std::exception& e) {
    p.error = e.what();
  }
  return p;
}

}  // namespace

std::string_view to_string(invariant_set s) {
  switch (s) {
    case invariant_set::full: return "full";
    case invariant_set::i1: return "I1";
    case invariant_set::i2: return "I2";
    case invariant_set::i3: return "I3";
  }
  return "full";
}

invariant_set invariant_set_from_string(std::string_view s) {
  for (auto v : {invariant_set::full, invariant_set::i1, invariant_set::i2, invariant_set::i3}) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument("unknown invariant set '" + std::string(s) + "' (use I1, I2, I3 or full)");
}

bool in_set(const classification& c, invariant_set s) {
  switch (s) {
    case invariant_set::full: return true;
    case invariant_set::i1: return c.in_i1;
    case invariant_set::i2: return c.in_i2;
    case invariant_set::i3: return c.in_i3;
  }
  return false;
}

double field_bound(const model_params& params) { return params.k() * std::abs(std::atanh(params.theta())); }

std::vector<field_quad> make_seeds(const model_params& params, const seed_grid_spec& spec) {
  std::vector<double> levels = spec.levels;
  const double bound = field_bound(params);
  double widest = 0.0;
  for (double l : levels) widest = std::max(widest, std::abs(l));
  if (spec.extend_to_field_bound && bound > widest) {
    levels.push_back(-bound);
    levels.push_back(bound);
  }
  std::sort(levels.begin(), levels.end());

  std::vector<field_quad> seeds;
  for (double s : levels) seeds.push_back({s, s, s, s});
  for (double a : levels)
    for (double b : levels) {
      seeds.push_back({a, b, b, a});
      seeds.push_back({a, b, -b, -a});
    }
  const double box = std::max(bound, widest);
  for (int i = 1; i <= spec.general_points; ++i) {
    field_quad h;
    const int bases[4] = {2, 3, 5, 7};
    for (int c = 0; c < 4; ++c) h[c] = box * (2.0 * halton(i, bases[c]) - 1.0);
    seeds.push_back(h);
  }
  return seeds;
}

std::optional<field_quad> newton_polish(const field_quad& start, const model_params& params, double tol,
                                        int max_iter) {
  const double box = 2.0 * field_bound(params) + 1.0;
  field_quad h = start;
  double r = fixed_point_residual(h, params);
  for (int it = 0; it <= max_iter; ++it) {
    if (!std::isfinite(r)) return std::nullopt;
    if (r < tol) break;
    const field_quad w = w_map(h, params);
    vec4 f;
    for (int c = 0; c < 4; ++c) f[c] = h[c] - w[c];
    const vec4 step = fixed_point_jacobian(h, params).partialPivLu().solve(-f);
    if (!step.allFinite()) return std::nullopt;
    double lambda = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 40; ++ls, lambda *= 0.5) {
      field_quad trial;
      for (int c = 0; c < 4; ++c) trial[c] = std::clamp(h[c] + lambda * step[c], -box, box);
      const double rt = fixed_point_residual(trial, params);
      if (rt < r) {
        h = trial;
        r = rt;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  if (!(r < tol)) return std::nullopt;
  // A few plain steps past the tolerance bring the point to rounding level.
  for (int extra = 0; extra < 4 && r > 0.0; ++extra) {
    const field_quad w = w_map(h, params);
    vec4 f;
    for (int c = 0; c < 4; ++c) f[c] = h[c] - w[c];
    const vec4 step = fixed_point_jacobian(h, params).partialPivLu().solve(-f);
    if (!step.allFinite()) break;
    field_quad trial;
    for (int c = 0; c < 4; ++c) trial[c] = h[c] + step[c];
    const double rt = fixed_point_residual(trial, params);
    if (!(rt < r)) break;
    h = trial;
    r = rt;
  }
  return h;
}

std::optional<field_quad> solve_from_seed(const field_quad& seed, const model_params& params,
                                          const solve_options& opts) {
  const std::vector<field_quad> one{seed};
  auto found = run_start(one, 0, params, opts);
  if (found.empty()) return std::nullopt;
  return found.front();
}

std::vector<field_quad> dedup_fields(std::vector<field_quad> hs, double tol) {
  std::sort(hs.begin(), hs.end());
  std::vector<field_quad> kept;
  for (const auto& h : hs) {
    const bool seen = std::any_of(kept.begin(), kept.end(),
                                  [&](const field_quad& g) { return max_norm_distance(g, h) <= tol; });
    if (!seen) kept.push_back(h);
  }
  return kept;
}

full_solve_result solve_full_system(const model_params& params, const solve_options& opts) {
  const auto seeds = make_seeds(params, opts.seeds);
  std::vector<std::vector<field_quad>> slots(seeds.size());
  const int n = static_cast<int>(seeds.size());
#pragma omp parallel for num_threads(std::max(1, opts.jobs)) schedule(dynamic, 8)
  for (int i = 0; i < n; ++i) {
    slots[static_cast<std::size_t>(i)] = run_start(seeds, static_cast<std::size_t>(i), params, opts);
  }
  return merge_candidates(params, opts, slots);
}

int fixed_point_index(const field_quad& h, const model_params& params, invariant_set restrict_to) {
  const mat4 j = fixed_point_jacobian(h, params);
  double det = 0.0;
  if (restrict_to == invariant_set::full) {
    det = j.determinant();
  } else {
    // Orthonormal basis of the subspace; DW maps it into itself.
    Eigen::Matrix<double, 4, Eigen::Dynamic> basis;
    if (restrict_to == invariant_set::i1) {
      basis.resize(4, 1);
      basis.col(0) << 1, 1, 1, 1;
    } else {
      const double s = restrict_to == invariant_set::i2 ? 1.0 : -1.0;
      basis.resize(4, 2);
      basis.col(0) << 1, 0, 0, s;
      basis.col(1) << 0, 1, s, 0;
    }
    basis.colwise().normalize();
    det = (basis.transpose() * j * basis).determinant();
  }
  return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
}

std::vector<solution_record> scan_solutions(int k, int a_size, double alpha, const scan_options& opts) {
  if (reduction_path(k, a_size, opts)) return count_i3_solutions(k, alpha).records;
  auto inner = opts.solve;
  inner.jobs = 1;
  return filter_set(solve_full_system(model_params::from_alpha(k, a_size, alpha), inner).records,
                    opts.restrict_to);
}

scan_report scan_alpha(int k, int a_size, double alpha_lo, double alpha_hi, int steps,
                       const scan_options& opts) {
  const auto grid = alpha_grid(alpha_lo, alpha_hi, steps);
  scan_report report{k, a_size, opts.restrict_to, reduction_path(k, a_size, opts), {}, {}};
  report.points.resize(grid.size());
  const int n = static_cast<int>(grid.size());
  const int jobs = std::max(1, opts.jobs);
#pragma omp parallel for num_threads(jobs) schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) {
    report.points[static_cast<std::size_t>(i)] = scan_one(k, a_size, grid[static_cast<std::size_t>(i)], opts);
  }

  const auto brackets = changed_brackets(report.points);
  std::vector<std::vector<count_transition>> refined(brackets.size());
  const int nb = static_cast<int>(brackets.size());
#pragma omp parallel for num_threads(jobs) schedule(dynamic, 1)
  for (int b = 0; b < nb; ++b) {
    const auto [i, j] = brackets[static_cast<std::size_t>(b)];
    refined[static_cast<std::size_t>(b)] = refine_bracket(k, a_size, report.points[i], report.points[j], opts);
  }
  for (auto& r : refined)
    for (auto& t : r) report.transitions.push_back(t);
  return report;
}

std::optional<int> tangency_count(const std::vector<solution_record>& before,
                                  const std::vector<solution_record>& after, invariant_set restrict_to) {
  const bool grows = after.size() > before.size();
  const auto& rich = grows ? after : before;
  const auto& poor = grows ? before : after;
  const std::size_t diff = rich.size() - poor.size();
  if (diff == 0 || diff % 2 != 0) return std::nullopt;

  // The solutions that disappear are the ones farthest from anything on the other side.
  std::vector<std::pair<double, std::size_t>> dist;
  for (std::size_t i = 0; i < rich.size(); ++i) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& p : poor) d = std::min(d, max_norm_distance(rich[i].h, p.h));
    dist.emplace_back(d, i);
  }
  std::stable_sort(dist.begin(), dist.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::size_t> vanishing;
  for (std::size_t i = 0; i < diff; ++i) vanishing.push_back(dist[i].second);

  // Pair them closest-first; a saddle-node pair has fixed-point indices of opposite sign.
  std::vector<bool> used(vanishing.size(), false);
  for (std::size_t round = 0; round < diff / 2; ++round) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0;
    std::size_t bj = 0;
    for (std::size_t i = 0; i < vanishing.size(); ++i) {
      if (used[i]) continue;
      for (std::size_t j = i + 1; j < vanishing.size(); ++j) {
        if (used[j]) continue;
        const double d = max_norm_distance(rich[vanishing[i]].h, rich[vanishing[j]].h);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    used[bi] = used[bj] = true;
    const auto& a = rich[vanishing[bi]];
    const auto& b = rich[vanishing[bj]];
    if (fixed_point_index(a.h, a.params, restrict_to) * fixed_point_index(b.h, b.params, restrict_to) >= 0) {
      return std::nullopt;
    }
  }
  return static_cast<int>(poor.size() + diff / 2);
}

std::string_view count_exactness(int k, int a_size, invariant_set s) {
  return (a_size == k && s == invariant_set::i3 && k <= 4) ? "exact" : "observed";
}

interval phi_default_range(int k, double alpha) {
  const double m = std::max(alpha, 1.0 / alpha);
  const double top = std::min(std::pow(m, k), 1e300);
  return {0.5 / top, 2.0 * top};
}

phi_crossings count_phi_crossings(int k, double alpha, std::optional<interval> range, int grid_n) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (!(alpha > 0.0)) throw std::domain_error("alpha must be positive");
  const interval r = range.value_or(phi_default_range(k, alpha));
  if (!(r.lo > 0.0 && r.lo < 1.0 && r.hi > 1.0)) throw std::invalid_argument("phi range must satisfy 0 < lo < 1 < hi");

  phi_crossings out{k, alpha, r, 0, {}, {}};
  // Work in t = ln x so crossings from 1e-3 to 1e3 are resolved alike.
  auto gap = [k, alpha](double t) {
    const double x = std::exp(t);
    return phi(x, k, alpha) - x;
  };
  auto ts = isolate_and_refine(gap, {std::log(r.lo), std::log(r.hi)}, grid_n, 1e-14);
  bool has_one = false;
  for (double t : ts) {
    if (std::abs(t) < 1e-9) {
      if (!has_one) out.xs.push_back(1.0);
      has_one = true;
    } else {
      out.xs.push_back(std::exp(t));
    }
  }
  if (!has_one) out.xs.push_back(1.0);
  std::sort(out.xs.begin(), out.xs.end());
  out.count = static_cast<int>(out.xs.size());

  const auto params = model_params::from_alpha(k, k, alpha);
  for (double x : out.xs) {
    out.records.push_back(make_record(params, lift_phi_fixed_point(x, k, alpha), 1e-9, solution_source::phi_crossing));
  }
  return out;
}

namespace reference {

full_solve_result solve_full_system(const model_params& params, const solve_options& opts) {
  const auto seeds = make_seeds(params, opts.seeds);
  std::vector<std::vector<field_quad>> slots;
  slots.reserve(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) slots.push_back(run_start(seeds, i, params, opts));
  return merge_candidates(params, opts, slots);
}

scan_report scan_alpha(int k, int a_size, double alpha_lo, double alpha_hi, int steps,
                       const scan_options& opts) {
  const auto grid = alpha_grid(alpha_lo, alpha_hi, steps);
  scan_report report{k, a_size, opts.restrict_to, reduction_path(k, a_size, opts), {}, {}};
  for (double a : grid) report.points.push_back(scan_one(k, a_size, a, opts));
  for (const auto& [i, j] : changed_brackets(report.points)) {
    for (auto& t : refine_bracket(k, a_size, report.points[i], report.points[j], opts)) {
      report.transitions.push_back(t);
    }
  }
  return report;
}

}  // namespace reference

}  // namespace wpgibbs
