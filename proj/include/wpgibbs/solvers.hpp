#pragma once

/**
 * @file solvers.hpp
 * @brief Multi-start fixed-point search for W, alpha scans, phi crossings.
 *
 * The multi-start kernels run their independent starts under OpenMP, each
 * start writing to its own slot, followed by a serial canonical merge. So
 * the output does not depend on the worker count. The plain loops in
 * `reference::` are kept as the baseline the parallel paths are tested
 * against.
 */

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wpgibbs/ising_field.hpp"
#include "wpgibbs/reduction.hpp"
#include "wpgibbs/roots.hpp"

namespace wpgibbs {

enum class invariant_set { full, i1, i2, i3 };

std::string_view to_string(invariant_set s);
invariant_set invariant_set_from_string(std::string_view s);
bool in_set(const classification& c, invariant_set s);

struct seed_grid_spec {
  std::vector<double> levels{-3.0, -1.0, -0.3, 0.0, 0.3, 1.0, 3.0};
  int general_points = 200;
  /// Adds +-B to the levels when the a priori field bound B exceeds the largest level.
  bool extend_to_field_bound = true;
};

struct solve_options {
  double tol = 1e-10;
  double damping = 0.5;
  double newton_switch = 1e-3;
  int max_damped_iter = 2000;
  int max_newton_iter = 100;
  double dedup_tol = 1e-6;
  double classify_tol = default_classify_tol;
  seed_grid_spec seeds;
  int jobs = 1;
};

struct full_solve_result {
  std::vector<solution_record> records;  ///< deduplicated, lexicographic in h
  int starts = 0;
  int dropped_starts = 0;
  bool symmetry_closed = false;  ///< closure under h -> -h and the coset swap, checked after merge
};

/// Bound on |h_i| for every fixed point: k |artanh(theta)|.
double field_bound(const model_params& params);

/// Seeds on I1, I2, I3 from the tensor levels plus Halton points in the field box.
std::vector<field_quad> make_seeds(const model_params& params, const seed_grid_spec& spec);

/// Newton on h - W(h) with the analytic Jacobian and backtracking.
std::optional<field_quad> newton_polish(const field_quad& start, const model_params& params,
                                        double tol, int max_iter = 100);

/// Damped iteration h <- h + d (W(h) - h), switching to Newton near convergence;
/// Newton straight from the seed if the damped phase stalls.
std::optional<field_quad> solve_from_seed(const field_quad& seed, const model_params& params,
                                          const solve_options& opts);

/// Sorts lexicographically and merges points within `tol` (max-norm); first of a cluster wins.
std::vector<field_quad> dedup_fields(std::vector<field_quad> hs, double tol);

full_solve_result solve_full_system(const model_params& params, const solve_options& opts = {});

/// sign(det(I - DW(h))), with DW restricted to the invariant subspace `restrict_to`.
int fixed_point_index(const field_quad& h, const model_params& params,
                      invariant_set restrict_to = invariant_set::full);

struct scan_options {
  invariant_set restrict_to = invariant_set::full;
  /// With |A| = k and restrict_to == i3, count through the xi polynomial instead of the 4-D solve.
  bool use_i3_reduction = true;
  double bifurcation_width = 1e-3;
  solve_options solve;
  int jobs = 1;
};

struct scan_point {
  double alpha = 0.0;
  int count = -1;  ///< -1 when the solve at this alpha failed
  std::vector<solution_record> solutions;
  std::string error;
};

struct count_transition {
  double alpha_lo = 0.0;
  double alpha_hi = 0.0;
  int count_before = 0;  ///< at alpha_lo
  int count_after = 0;   ///< at alpha_hi
  /// Count at the bifurcation point, when the vanishing solutions pair up as
  /// saddle-node pairs (nearest neighbours with opposite fixed-point index).
  std::optional<int> count_at_tangency;
};

struct scan_report {
  int k = 0;
  int a_size = 0;
  invariant_set restrict_to = invariant_set::full;
  bool reduction_path = false;
  std::vector<scan_point> points;
  std::vector<count_transition> transitions;
};

/// Solutions at a single alpha under the scan's counting rule.
std::vector<solution_record> scan_solutions(int k, int a_size, double alpha, const scan_options& opts);

/// alpha grid lo..hi with `steps` points; count changes refined by bisection in alpha.
scan_report scan_alpha(int k, int a_size, double alpha_lo, double alpha_hi, int steps,
                       const scan_options& opts = {});

/// Solutions from the two sides of a refined transition; fills count_at_tangency when it applies.
std::optional<int> tangency_count(const std::vector<solution_record>& before,
                                  const std::vector<solution_record>& after,
                                  invariant_set restrict_to = invariant_set::full);

/// "exact" where the closed-form I3 analysis certifies counts, "observed" otherwise.
std::string_view count_exactness(int k, int a_size, invariant_set s);

struct phi_crossings {
  int k = 0;
  double alpha = 0.0;
  interval range{};
  int count = 0;
  std::vector<double> xs;  ///< ascending, includes 1
  std::vector<solution_record> records;
};

/// Every fixed point of phi lies in [m^-k, m^k], m = max(a, 1/a); the default range pads it by 2x.
interval phi_default_range(int k, double alpha);

phi_crossings count_phi_crossings(int k, double alpha, std::optional<interval> range = std::nullopt,
                                  int grid_n = 20000);

namespace reference {

full_solve_result solve_full_system(const model_params& params, const solve_options& opts = {});
scan_report scan_alpha(int k, int a_size, double alpha_lo, double alpha_hi, int steps,
                       const scan_options& opts = {});

}  // namespace reference

}  // namespace wpgibbs
