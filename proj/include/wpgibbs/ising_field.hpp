#pragma once

/**
 * @file ising_field.hpp
 * @brief Ising recursion kernel and the weakly periodic boundary-field map W.
 *
 * A weakly periodic field for H_A takes four values h1..h4 depending on whether
 * a vertex and its parent lie in H_A:
 *
 *   h1: x in H_A,  parent in H_A        h2: x in H_A,  parent not in H_A
 *   h3: x not in H_A, parent in H_A     h4: x not in H_A, parent not in H_A
 *
 * Consistent fields are fixed points of W. Everything downstream of the
 * parameters depends on |A| only; the explicit set is needed for field
 * assignment on actual tree vertices.
 */

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "wpgibbs/cayley_group.hpp"

namespace wpgibbs {

double alpha_from_theta(double theta);
double theta_from_alpha(double alpha);

/// Tree order, |A| and the coupling. alpha is canonical; theta = tanh(J beta).
class model_params {
 public:
  static model_params from_alpha(int k, int a_size, double alpha);
  static model_params from_theta(int k, int a_size, double theta);
  /// theta = tanh(j * beta); both are kept for the enumeration oracle.
  static model_params from_coupling(int k, int a_size, double j, double beta);

  int k() const noexcept { return k_; }
  int a_size() const noexcept { return a_size_; }
  double alpha() const noexcept { return alpha_; }
  double theta() const noexcept { return theta_; }
  /// J*beta. Defaults to artanh(theta) with beta = 1 when not supplied.
  double coupling() const noexcept { return coupling_; }
  std::optional<double> j() const noexcept { return j_; }
  std::optional<double> beta() const noexcept { return beta_; }

  model_params with_alpha(double alpha) const { return from_alpha(k_, a_size_, alpha); }

 private:
  model_params(int k, int a_size, double alpha, double theta);
  int k_;
  int a_size_;
  double alpha_;
  double theta_;
  double coupling_;
  std::optional<double> j_;
  std::optional<double> beta_;
};

using field_quad = std::array<double, 4>;
using z_quad = std::array<double, 4>;

z_quad to_z(const field_quad& h);
field_quad to_h(const z_quad& z);

/// f(h, theta) = artanh(theta tanh h), evaluated in the logarithmic form.
double f_field(double h, double theta);
/// d/dh f(h, theta).
double f_field_derivative(double h, double theta);
/// The same kernel in z = exp(2h) coordinates: (x + alpha) / (alpha x + 1).
double f_mobius(double x, double alpha);

field_quad w_map(const field_quad& h, const model_params& params);
z_quad w_map_z(const z_quad& z, const model_params& params);
/// Jacobian of W, row-major: jac[i][j] = dW_i / dh_j.
std::array<std::array<double, 4>, 4> w_jacobian(const field_quad& h, const model_params& params);

/// Max-norm of h - W(h).
double fixed_point_residual(const field_quad& h, const model_params& params);

/// (h4, h3, h2, h1): exchanges the roles of the two cosets.
field_quad swap_cosets(const field_quad& h);
field_quad negate(const field_quad& h);
double max_norm_distance(const field_quad& a, const field_quad& b);

/// Role 0..3 (for h1..h4) of a non-root vertex.
int field_role(const group_word& x, const subgroup_spec& spec);
/// h_x for a non-root vertex. Throws std::domain_error at the root.
double assign_field(const group_word& x, const subgroup_spec& spec, const field_quad& h);

inline constexpr double default_classify_tol = 1e-8;

struct classification {
  bool translation_invariant = false;
  bool in_i1 = false;
  bool in_i2 = false;
  bool in_i3 = false;
  double tol = default_classify_tol;
};

classification classify(const field_quad& h, double tol = default_classify_tol);

enum class solution_source { full_solve, i3_reduction, phi_crossing, ti_scalar };

std::string_view to_string(solution_source s);
solution_source solution_source_from_string(std::string_view s);

struct solution_record {
  model_params params;
  field_quad h{};
  double residual = 0.0;
  double solver_tol = 0.0;
  classification flags;
  solution_source source = solution_source::full_solve;
};

solution_record make_record(const model_params& params, const field_quad& h, double solver_tol,
                            solution_source source, double classify_tol = default_classify_tol);

/// Roots of the scalar translation-invariant equation h = k f(h, theta) in [-bound, bound].
std::vector<double> ti_solutions(int k, double theta, double bound = 20.0, int grid_n = 20000);

}  // namespace wpgibbs
