#pragma once

/**
 * @file reduction.hpp
 * @brief Analytic reduction of the |A| = k system on the antisymmetric set I3.
 *
 * On I3 (h1 = -h4, h2 = -h3) with |A| = k the four equations collapse to a
 * single equation in z2 = exp(2 h2). The substitution u = f(z2) turns it into
 *
 *     u^{2k} - a u^{2k-1} + a^2 u^{k+1} - a^2 u^{k-1} + a u - 1 = 0,
 *
 * which factors as (u^2 - 1) P(u) with P palindromic of degree 2k-2. With
 * xi = u + 1/u the palindromic factor becomes a degree k-1 polynomial in xi.
 * Each root xi > 2 gives the pair {u, 1/u}, hence two non-trivial fields;
 * u = 1 is the zero field.
 *
 * Outside I3 the composite map phi = g o g with
 * g(x) = f(x)^{k-1} f(f(x)^k) carries every solution of the |A| = k system.
 */

#include <vector>

#include "wpgibbs/ising_field.hpp"
#include "wpgibbs/polynomial.hpp"

namespace wpgibbs {

/// RHS(z2) - z2, with RHS built by substituting z1 = f(1/z2)^k into the second I3 equation.
double i3_scalar_residual(double z2, int k, double alpha);
/// The same residual from the closed rational expression in z2.
double i3_scalar_residual_direct(double z2, int k, double alpha);

double u_from_z2(double z2, double alpha);
/// Inverse of u_from_z2; throws std::domain_error for u outside (min(a,1/a), max(a,1/a)).
double z2_from_u(double u, double alpha);

/// Degree-2k polynomial in u (coefficients of colliding degrees summed for k <= 2).
polynomial poly_u(int k, double alpha);

/// Divides by u^2 - 1. Throws numerical_error when the remainder exceeds 1e-12 * max|coeff|.
polynomial deflate_u2_minus_1(const polynomial& p);

/// q with u^m q(u + 1/u) = p(u) for palindromic p of degree 2m.
/// Throws std::invalid_argument for odd degree or a non-palindromic input.
polynomial xi_reduce(const polynomial& p);

/// q(xi) for the |A| = k, I3 problem: deflate_u2_minus_1 then xi_reduce of poly_u.
polynomial xi_polynomial(int k, double alpha);

/// k = 4 cubic: xi^3 - a xi^2 - 2 xi + a^2 + a.
double gamma_cubic(double xi, double alpha);
/// Positive stationary point of gamma_cubic.
double xi_star(double alpha);
double psi(double alpha);
/// Left end of the interval on which psi is increasing: (48 + sqrt(264)) / 12.
double alpha_prime();
/// Root of psi in (alpha_prime, 50]: the k = 4 bifurcation value on I3.
double alpha_critical();

/// Solutions on I3 for |A| = k, alpha > 1.
struct i3_solution_set {
  int k = 0;
  double alpha = 0.0;
  int count = 0;
  std::vector<double> xi_roots;        ///< accepted roots xi in (2, a + 1/a)
  std::vector<double> discarded_xi;    ///< roots in the search range with no positive z2
  bool tangency = false;               ///< some accepted xi root is a double root
  std::vector<double> z2;              ///< ascending, includes 1
  std::vector<solution_record> records;
};

inline constexpr double xi_tangency_tol = 1e-8;

i3_solution_set count_i3_solutions(int k, double alpha);

/// Full quad on I3 from z2 (|A| = k).
field_quad lift_i3(double z2, int k, double alpha);

/// g(x) = f(x)^{k-1} f(f(x)^k): the z2 -> z3 step of the |A| = k system.
double half_phi(double x, int k, double alpha);
double phi(double x, int k, double alpha);
/// (a - 1)^2 (a + 1 - 2k)^2 / (1 + a)^4.
double phi_prime_at_1(int k, double alpha);
/// Full quad from a fixed point x of phi (|A| = k): z2 = x, z4 = f(z2)^k, z3 = g(z2), z1 = f(z3)^k.
field_quad lift_phi_fixed_point(double x, int k, double alpha);

struct alpha_band_t {
  double lower = 0.0;
  double upper = 0.0;
  bool empty = true;
  double factor_point = 0.0;  ///< (k-1)/(k+1), the third root of phi'(1) - 1
  bool contains(double alpha) const noexcept { return !empty && alpha > lower && alpha < upper; }
};

/// alpha with phi'(1) > 1 and alpha > 1: (k-1 -+ sqrt(k^2-6k+1))/2, empty for k <= 5.
alpha_band_t alpha_band(int k);

struct theta_pair {
  double lower = 0.0;
  double upper = 0.0;
  bool empty = true;
};

/// (k-1 -+ sqrt(k^2-6k+1)) / (2k).
theta_pair theta_band(int k);

}  // namespace wpgibbs
