#include "wpgibbs/ising_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wpgibbs/roots.hpp"

namespace wpgibbs {

double alpha_from_theta(double theta) {
  if (!(std::abs(theta) < 1.0)) throw std::domain_error("theta must lie in (-1, 1)");
  return (1.0 - theta) / (1.0 + theta);
}

double theta_from_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::domain_error("alpha must be positive");
  return (1.0 - alpha) / (1.0 + alpha);
}

model_params::model_params(int k, int a_size, double alpha, double theta)
    : k_(k), a_size_(a_size), alpha_(alpha), theta_(theta), coupling_(std::atanh(theta)) {
  if (k < 1) throw std::invalid_argument("tree order k must be >= 1");
  if (a_size < 1 || a_size > k) throw std::invalid_argument("|A| must be in [1, k]");
}

model_params model_params::from_alpha(int k, int a_size, double alpha) {
  return model_params(k, a_size, alpha, theta_from_alpha(alpha));
}

model_params model_params::from_theta(int k, int a_size, double theta) {
  return model_params(k, a_size, alpha_from_theta(theta), theta);
}

model_params model_params::from_coupling(int k, int a_size, double j, double beta) {
  if (!(beta > 0.0)) throw std::domain_error("beta must be positive");
  auto p = from_theta(k, a_size, std::tanh(j * beta));
  p.coupling_ = j * beta;
  p.j_ = j;
  p.beta_ = beta;
  return p;
}

z_quad to_z(const field_quad& h) {
  z_quad z;
  for (int i = 0; i < 4; ++i) z[i] = std::exp(2.0 * h[i]);
  return z;
}

field_quad to_h(const z_quad& z) {
  field_quad h;
  for (int i = 0; i < 4; ++i) {
    if (!(z[i] > 0.0)) throw std::domain_error("z components must be positive");
    h[i] = 0.5 * std::log(z[i]);
  }
  return h;
}

double f_field(double h, double theta) {
  // 1/2 ln[((1+t)e^{2h} + (1-t)) / ((1-t)e^{2h} + (1+t))], scaled by e^{-2|h|} so nothing overflows.
  const double a = std::abs(h);
  const double e = std::exp(-2.0 * a);
  const double num = (1.0 + theta) + (1.0 - theta) * e;
  const double den = (1.0 - theta) + (1.0 + theta) * e;
  const double v = 0.5 * std::log(num / den);
  return h < 0.0 ? -v : v;
}

double f_field_derivative(double h, double theta) {
  const double t = std::tanh(h);
  const double s = 1.0 - t * t;
  return theta * s / (1.0 - theta * theta * t * t);
}

double f_mobius(double x, double alpha) { return (x + alpha) / (alpha * x + 1.0); }

field_quad w_map(const field_quad& h, const model_params& params) {
  const double k = params.k();
  const double a = params.a_size();
  const double t = params.theta();
  const double f1 = f_field(h[0], t);
  const double f2 = f_field(h[1], t);
  const double f3 = f_field(h[2], t);
  const double f4 = f_field(h[3], t);
  return {a * f3 + (k - a) * f1, (a - 1.0) * f3 + (k + 1.0 - a) * f1,
          (a - 1.0) * f2 + (k + 1.0 - a) * f4, a * f2 + (k - a) * f4};
}

z_quad w_map_z(const z_quad& z, const model_params& params) {
  const int k = params.k();
  const int a = params.a_size();
  const double al = params.alpha();
  const double g1 = f_mobius(z[0], al);
  const double g2 = f_mobius(z[1], al);
  const double g3 = f_mobius(z[2], al);
  const double g4 = f_mobius(z[3], al);
  return {std::pow(g3, a) * std::pow(g1, k - a), std::pow(g3, a - 1) * std::pow(g1, k + 1 - a),
          std::pow(g2, a - 1) * std::pow(g4, k + 1 - a), std::pow(g2, a) * std::pow(g4, k - a)};
}

std::array<std::array<double, 4>, 4> w_jacobian(const field_quad& h, const model_params& params) {
  const double k = params.k();
  const double a = params.a_size();
  const double t = params.theta();
  const double d1 = f_field_derivative(h[0], t);
  const double d2 = f_field_derivative(h[1], t);
  const double d3 = f_field_derivative(h[2], t);
  const double d4 = f_field_derivative(h[3], t);
  return {{{(k - a) * d1, 0.0, a * d3, 0.0},
           {(k + 1.0 - a) * d1, 0.0, (a - 1.0) * d3, 0.0},
           {0.0, (a - 1.0) * d2, 0.0, (k + 1.0 - a) * d4},
           {0.0, a * d2, 0.0, (k - a) * d4}}};
}

double fixed_point_residual(const field_quad& h, const model_params& params) {
  return max_norm_distance(h, w_map(h, params));
}

field_quad swap_cosets(const field_quad& h) { return {h[3], h[2], h[1], h[0]}; }

field_quad negate(const field_quad& h) { return {-h[0], -h[1], -h[2], -h[3]}; }

double max_norm_distance(const field_quad& a, const field_quad& b) {
  double m = 0.0;
  for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

int field_role(const group_word& x, const subgroup_spec& spec) {
  if (x.is_identity()) throw std::domain_error("field roles are undefined at the root");
  const bool self = in_ha(x, spec);
  // x and its parent differ by the last letter only.
  const bool up = self != spec.contains(x.last_letter());
  if (self) return up ? 0 : 1;
  return up ? 2 : 3;
}

double assign_field(const group_word& x, const subgroup_spec& spec, const field_quad& h) {
  return h[static_cast<std::size_t>(field_role(x, spec))];
}

classification classify(const field_quad& h, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("classification tolerance must be positive");
  classification c;
  c.tol = tol;
  double spread = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) spread = std::max(spread, std::abs(h[i] - h[j]));
  c.translation_invariant = spread <= tol;
  c.in_i1 = c.translation_invariant;
  c.in_i2 = std::abs(h[0] - h[3]) <= tol && std::abs(h[1] - h[2]) <= tol;
  c.in_i3 = std::abs(h[0] + h[3]) <= tol && std::abs(h[1] + h[2]) <= tol;
  return c;
}

std::string_view to_string(solution_source s) {
  switch (s) {
    case solution_source::full_solve: return "full_solve";
    case solution_source::i3_reduction: return "i3_reduction";
    case solution_source::phi_crossing: return "phi_crossing";
    case solution_source::ti_scalar: return "ti_scalar";
  }
  return "unknown";
}

solution_source solution_source_from_string(std::string_view s) {
  for (auto v : {solution_source::full_solve, solution_source::i3_reduction,
                 solution_source::phi_crossing, solution_source::ti_scalar}) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument("unknown solution source '" + std::string(s) + "'");
}

solution_record make_record(const model_params& params, const field_quad& h, double solver_tol,
                            solution_source source, double classify_tol) {
  return solution_record{params, h, fixed_point_residual(h, params), solver_tol,
                         classify(h, classify_tol), source};
}

std::vector<double> ti_solutions(int k, double theta, double bound, int grid_n) {
  auto g = [&](double h) { return k * f_field(h, theta) - h; };
  auto roots = isolate_and_refine(g, {-bound, bound}, grid_n, 1e-14);
  // h = 0 is always a root; a grid point may land on it exactly or straddle it.
  if (std::none_of(roots.begin(), roots.end(), [](double r) { return std::abs(r) < 1e-10; })) {
    roots.push_back(0.0);
    std::sort(roots.begin(), roots.end());
  }
  return roots;
}

}  // namespace wpgibbs
