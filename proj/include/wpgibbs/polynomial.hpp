#pragma once

#include <span>
#include <vector>

namespace wpgibbs {

/// Dense real polynomial, coefficients by ascending degree.
class polynomial {
 public:
  polynomial() = default;
  explicit polynomial(std::vector<double> coeffs);

  /// Degree after trimming; -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  double operator[](int d) const { return d >= 0 && d <= degree() ? coeffs_[static_cast<std::size_t>(d)] : 0.0; }
  double max_abs_coeff() const noexcept;

  double operator()(double x) const noexcept;
  polynomial derivative() const;

  /// Largest |c_j - c_{deg-j}|.
  double palindrome_defect() const noexcept;
  /// Largest |c_j + c_{deg-j}|.
  double antipalindrome_defect() const noexcept;

  friend polynomial operator*(const polynomial& a, const polynomial& b);
  friend polynomial operator+(const polynomial& a, const polynomial& b);
  friend polynomial operator-(const polynomial& a, const polynomial& b);
  friend polynomial operator*(double s, const polynomial& p);
  friend bool operator==(const polynomial&, const polynomial&) = default;

 private:
  std::vector<double> coeffs_;
};

struct division_result {
  polynomial quotient;
  polynomial remainder;
};

division_result divide(const polynomial& num, const polynomial& den);

struct poly_root {
  double value;
  bool tangential;  ///< double root detected at a stationary point
};

/// Real roots in (lo, hi]. Stationary points (found recursively from the
/// derivative) split the range into monotone pieces, each bracketing at most
/// one simple root. A stationary point c with |p(c)| <= tangency_tol is
/// reported once as a tangential root; sign-change roots hugging it are folded in.
std::vector<poly_root> real_roots(const polynomial& p, double lo, double hi, double tol = 1e-12,
                                  double tangency_tol = 1e-8);

}  // namespace wpgibbs
