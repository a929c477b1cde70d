#include "wpgibbs/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wpgibbs/roots.hpp"

namespace wpgibbs {

polynomial::polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double polynomial::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double polynomial::operator()(double x) const noexcept {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

polynomial polynomial::derivative() const {
  if (coeffs_.size() <= 1) return polynomial{};
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
  return polynomial(std::move(d));
}

double polynomial::palindrome_defect() const noexcept {
  double m = 0.0;
  const std::size_t n = coeffs_.size();
  for (std::size_t j = 0; j < n; ++j) m = std::max(m, std::abs(coeffs_[j] - coeffs_[n - 1 - j]));
  return m;
}

double polynomial::antipalindrome_defect() const noexcept {
  double m = 0.0;
  const std::size_t n = coeffs_.size();
  for (std::size_t j = 0; j < n; ++j) m = std::max(m, std::abs(coeffs_[j] + coeffs_[n - 1 - j]));
  return m;
}

polynomial operator*(const polynomial& a, const polynomial& b) {
  if (a.coeffs_.empty() || b.coeffs_.empty()) return polynomial{};
  std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return polynomial(std::move(c));
}

polynomial operator+(const polynomial& a, const polynomial& b) {
  std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
  return polynomial(std::move(c));
}

polynomial operator*(double s, const polynomial& p) {
  std::vector<double> c(p.coeffs_);
  for (double& x : c) x *= s;
  return polynomial(std::move(c));
}

polynomial operator-(const polynomial& a, const polynomial& b) {
  std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] -= b.coeffs_[i];
  return polynomial(std::move(c));
}

division_result divide(const polynomial& num, const polynomial& den) {
  if (den.degree() < 0) throw std::domain_error("division by the zero polynomial");
  std::vector<double> rem = num.coeffs();
  const int dn = den.degree();
  const int nn = num.degree();
  if (nn < dn) return {polynomial{}, num};
  std::vector<double> quot(static_cast<std::size_t>(nn - dn + 1), 0.0);
  const double lead = den[dn];
  for (int i = nn - dn; i >= 0; --i) {
    const double q = rem[static_cast<std::size_t>(i + dn)] / lead;
    quot[static_cast<std::size_t>(i)] = q;
    for (int j = 0; j <= dn; ++j) rem[static_cast<std::size_t>(i + j)] -= q * den[j];
  }
  rem.resize(static_cast<std::size_t>(dn));
  return {polynomial(std::move(quot)), polynomial(std::move(rem))};
}

std::vector<poly_root> real_roots(const polynomial& p, double lo, double hi, double tol,
                                  double tangency_tol) {
  std::vector<poly_root> out;
  const int deg = p.degree();
  if (deg <= 0 || !(hi > lo)) return out;
  if (deg == 1) {
    const double r = -p[0] / p[1];
    if (r > lo && r <= hi) out.push_back({r, false});
    return out;
  }

  const polynomial dp = p.derivative();
  const polynomial ddp = dp.derivative();
  std::vector<double> breaks{lo};
  for (const auto& c : real_roots(dp, lo, hi, tol, 0.0)) {
    if (c.value > lo && c.value < hi) breaks.push_back(c.value);
  }
  breaks.push_back(hi);

  struct tangent {
    double at;
    double reach;
  };
  std::vector<tangent> tangents;
  for (std::size_t i = 1; i + 1 < breaks.size(); ++i) {
    const double c = breaks[i];
    if (std::abs(p(c)) <= tangency_tol) {
      const double curv = std::abs(ddp(c));
      // Roots of p near a shallow minimum sit within sqrt(2 |p(c)| / |p''(c)|) of it.
      const double reach = curv > 0.0 ? 2.0 * std::sqrt(2.0 * tangency_tol / curv) + 10.0 * tol : 1e-3;
      tangents.push_back({c, reach});
      out.push_back({c, true});
    }
  }
  auto near_tangent = [&](double r) {
    return std::any_of(tangents.begin(), tangents.end(),
                       [&](const tangent& t) { return std::abs(r - t.at) <= t.reach; });
  };

  auto fn = [&p](double x) { return p(x); };
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double b = breaks[i + 1];
    const double fa = p(a);
    const double fb = p(b);
    if (fb == 0.0) {
      if (!near_tangent(b)) out.push_back({b, false});
      continue;
    }
    if (fa == 0.0) continue;  // counted by the previous piece, or excluded at lo
    if (std::signbit(fa) != std::signbit(fb)) {
      const double r = bisect(fn, a, b, tol);
      if (!near_tangent(r)) out.push_back({r, false});
    }
  }
  std::sort(out.begin(), out.end(), [](const poly_root& x, const poly_root& y) { return x.value < y.value; });
  return out;
}

}  // namespace wpgibbs
