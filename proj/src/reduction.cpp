#include "wpgibbs/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "wpgibbs/errors.hpp"
#include "wpgibbs/roots.hpp"

namespace wpgibbs {

double i3_scalar_residual(double z2, int k, double alpha) {
  const double z1 = std::pow(f_mobius(1.0 / z2, alpha), k);
  const double rhs = std::pow(f_mobius(1.0 / z2, alpha), k - 1) * f_mobius(z1, alpha);
  return rhs - z2;
}

double i3_scalar_residual_direct(double z2, int k, double alpha) {
  const double p = std::pow(alpha + z2, k);
  const double q = std::pow(1.0 + alpha * z2, k);
  const double pre = std::pow((1.0 + alpha * z2) / (alpha + z2), k - 1);
  return pre * (alpha * p + q) / (p + alpha * q) - z2;
}

double u_from_z2(double z2, double alpha) {
  if (!(z2 > 0.0)) throw std::domain_error("z2 must be positive");
  return f_mobius(z2, alpha);
}

double z2_from_u(double u, double alpha) {
  const double lo = std::min(alpha, 1.0 / alpha);
  const double hi = std::max(alpha, 1.0 / alpha);
  if (!(u > lo && u < hi)) {
    throw std::domain_error("u = " + std::to_string(u) + " has no positive preimage z2");
  }
  return (alpha - u) / (alpha * u - 1.0);
}

polynomial poly_u(int k, double alpha) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  std::vector<double> c(static_cast<std::size_t>(2 * k + 1), 0.0);
  auto at = [&c](int d) -> double& { return c[static_cast<std::size_t>(d)]; };
  at(2 * k) += 1.0;
  at(2 * k - 1) += -alpha;
  at(k + 1) += alpha * alpha;
  at(k - 1) += -alpha * alpha;
  at(1) += alpha;
  at(0) += -1.0;
  return polynomial(std::move(c));
}

polynomial deflate_u2_minus_1(const polynomial& p) {
  const int n = p.degree();
  if (n < 2) throw std::invalid_argument("polynomial of degree < 2 cannot carry u^2 - 1");
  // p = (u^2 - 1) q. Solve for the low half of q from the bottom and the high half
  // from the top; for an anti-palindromic p both sweeps perform mirrored operations,
  // so q comes out exactly palindromic.
  const int m = n - 2;
  std::vector<double> q(static_cast<std::size_t>(m + 1), 0.0);
  auto qa = [&q](int i) -> double& { return q[static_cast<std::size_t>(i)]; };
  const int half = m / 2;
  for (int i = 0; i <= half; ++i) qa(i) = (i >= 2 ? qa(i - 2) : 0.0) - p[i];
  for (int i = m; i > half; --i) qa(i) = p[i + 2] + (i + 2 <= m ? qa(i + 2) : 0.0);
  polynomial quotient(q);
  const polynomial residue = p - polynomial({-1.0, 0.0, 1.0}) * quotient;
  const double scale = p.max_abs_coeff();
  if (residue.max_abs_coeff() > 1e-12 * scale) {
    throw numerical_error("u^2 - 1 does not divide the polynomial (remainder " +
                          std::to_string(residue.max_abs_coeff()) + ")");
  }
  return quotient;
}

polynomial xi_reduce(const polynomial& p) {
  const int n = p.degree();
  if (n < 0 || n % 2 != 0) throw std::invalid_argument("xi reduction needs even degree");
  if (p.palindrome_defect() > 1e-12 * p.max_abs_coeff()) {
    throw std::invalid_argument("xi reduction needs a palindromic polynomial");
  }
  const int m = n / 2;
  // u^{-m} p(u) = c_m + sum_j c_{m+j} (u^j + u^-j), and u^j + u^-j = D_j(xi)
  // with D_0 = 2, D_1 = xi, D_{j+1} = xi D_j - D_{j-1}.
  const polynomial xi({0.0, 1.0});
  polynomial d_prev({2.0});
  polynomial d_cur = xi;
  polynomial q({p[m]});
  for (int j = 1; j <= m; ++j) {
    q = q + p[m + j] * d_cur;
    polynomial next = xi * d_cur - d_prev;
    d_prev = std::move(d_cur);
    d_cur = std::move(next);
  }
  return q;
}

polynomial xi_polynomial(int k, double alpha) { return xi_reduce(deflate_u2_minus_1(poly_u(k, alpha))); }

double gamma_cubic(double xi, double alpha) {
  return ((xi - alpha) * xi - 2.0) * xi + alpha * alpha + alpha;
}

double xi_star(double alpha) { return (alpha + std::sqrt(alpha * alpha + 6.0)) / 3.0; }

double psi(double alpha) {
  const double s = std::sqrt(alpha * alpha + 6.0);
  return 2.0 * alpha * alpha * alpha - 27.0 * alpha * alpha - 9.0 * alpha + 2.0 * s * s * s;
}

double alpha_prime() { return (48.0 + std::sqrt(264.0)) / 12.0; }

double alpha_critical() {
  const double lo = alpha_prime();
  const double hi = 50.0;
  if (!(psi(lo) < 0.0 && psi(hi) > 0.0)) throw numerical_error("psi does not change sign on (alpha', 50]");
  const double root = bisect(psi, lo, hi, 1e-14);
  if (!(std::abs(psi(root)) < 1e-10)) throw numerical_error("psi residual too large at alpha_cr");
  return root;
}

field_quad lift_i3(double z2, int k, double alpha) {
  const double u = f_mobius(z2, alpha);
  const double h1 = -0.5 * k * std::log(u);
  const double h2 = 0.5 * std::log(z2);
  return {h1, h2, -h2, -h1};
}

namespace {

// The map u -> z2 amplifies errors near the ends of (1/a, a); re-bracket on the scalar equation itself.
double polish_z2(double z2, int k, double alpha) {
  double lo = z2 * (1.0 - 1e-7);
  double hi = z2 * (1.0 + 1e-7);
  double f_lo = i3_scalar_residual(lo, k, alpha);
  if (f_lo * i3_scalar_residual(hi, k, alpha) > 0.0) return z2;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = i3_scalar_residual(mid, k, alpha);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  const double f_a = std::abs(i3_scalar_residual(lo, k, alpha));
  const double f_b = std::abs(i3_scalar_residual(hi, k, alpha));
  return f_a <= f_b ? lo : hi;
}

}  // namespace

i3_solution_set count_i3_solutions(int k, double alpha) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (!(alpha > 0.0)) throw std::domain_error("alpha must be positive");
  i3_solution_set out;
  out.k = k;
  out.alpha = alpha;
  out.z2.push_back(1.0);

  const double xi_edge = alpha + 1.0 / alpha;  // u in (1/a, a) <=> xi < a + 1/a
  if (k >= 2 && alpha != 1.0) {
    const polynomial q = xi_polynomial(k, alpha);
    for (const auto& r : real_roots(q, 2.0, xi_edge + 1.0, 1e-12, xi_tangency_tol)) {
      if (r.value >= xi_edge) {
        out.discarded_xi.push_back(r.value);
        continue;
      }
      out.xi_roots.push_back(r.value);
      out.tangency = out.tangency || r.tangential;
      const double s = std::sqrt(r.value * r.value - 4.0);
      const double u_big = 0.5 * (r.value + s);
      for (double u : {1.0 / u_big, u_big}) {
        const double z2 = z2_from_u(u, alpha);
        out.z2.push_back(r.tangential ? z2 : polish_z2(z2, k, alpha));
      }
    }
  }
  std::sort(out.z2.begin(), out.z2.end());
  out.count = static_cast<int>(out.z2.size());

  const auto params = model_params::from_alpha(k, k, alpha);
  for (double z2 : out.z2) {
    const double res = i3_scalar_residual(z2, k, alpha);
    if (!(std::abs(res) < 1e-9)) {
      throw numerical_error("I3 root z2 = " + std::to_string(z2) + " fails the scalar residual check");
    }
    out.records.push_back(make_record(params, lift_i3(z2, k, alpha), 1e-9, solution_source::i3_reduction));
  }
  return out;
}

double half_phi(double x, int k, double alpha) {
  const double fx = f_mobius(x, alpha);
  return std::pow(fx, k - 1) * f_mobius(std::pow(fx, k), alpha);
}

double phi(double x, int k, double alpha) { return half_phi(half_phi(x, k, alpha), k, alpha); }

double phi_prime_at_1(int k, double alpha) {
  const double a = (alpha - 1.0) * (alpha + 1.0 - 2.0 * k);
  const double b = (1.0 + alpha) * (1.0 + alpha);
  return (a * a) / (b * b);
}

field_quad lift_phi_fixed_point(double x, int k, double alpha) {
  const double z2 = x;
  const double z4 = std::pow(f_mobius(z2, alpha), k);
  const double z3 = std::pow(f_mobius(z2, alpha), k - 1) * f_mobius(z4, alpha);
  const double z1 = std::pow(f_mobius(z3, alpha), k);
  return to_h({z1, z2, z3, z4});
}

alpha_band_t alpha_band(int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  alpha_band_t band;
  band.factor_point = (k - 1.0) / (k + 1.0);
  const double disc = static_cast<double>(k) * k - 6.0 * k + 1.0;
  if (disc <= 0.0) return band;
  const double s = std::sqrt(disc);
  band.lower = (k - 1.0 - s) / 2.0;
  band.upper = (k - 1.0 + s) / 2.0;
  band.empty = false;
  return band;
}

theta_pair theta_band(int k) {
  const auto band = alpha_band(k);
  if (band.empty) return {};
  return {band.lower / k, band.upper / k, false};
}

}  // namespace wpgibbs
