#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "wpgibbs/errors.hpp"
#include "wpgibbs/polynomial.hpp"
#include "wpgibbs/reduction.hpp"
#include "wpgibbs/roots.hpp"

using namespace wpgibbs;

TEST_CASE("polynomial construction and evaluation") {
  const polynomial p({1.0, -3.0, 0.0, 2.0, 0.0, 0.0});
  CHECK(p.degree() == 3);
  CHECK(p[3] == 2.0);
  CHECK(p[7] == 0.0);
  CHECK(p[-1] == 0.0);
  CHECK(p(2.0) == doctest::Approx(1.0 - 6.0 + 16.0));
  CHECK(polynomial({0.0, 0.0}).degree() == -1);
  CHECK(polynomial().degree() == -1);
  CHECK(p.max_abs_coeff() == 3.0);
  CHECK(p.derivative() == polynomial({-3.0, 0.0, 6.0}));
}

TEST_CASE("polynomial arithmetic") {
  const polynomial a({1.0, 1.0});
  const polynomial b({-1.0, 1.0});
  CHECK(a * b == polynomial({-1.0, 0.0, 1.0}));
  CHECK(a + b == polynomial({0.0, 2.0}));
  CHECK(a - a == polynomial());
  CHECK(2.0 * a == polynomial({2.0, 2.0}));
}

TEST_CASE("palindrome defects") {
  CHECK(polynomial({1.0, -2.0, 5.0, -2.0, 1.0}).palindrome_defect() == 0.0);
  CHECK(polynomial({1.0, 0.0, -1.0}).antipalindrome_defect() == 0.0);
  CHECK(polynomial({1.0, 2.0, 3.0}).palindrome_defect() == 2.0);
}

TEST_CASE("division recovers quotient and remainder") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> qc(1 + rng() % 6);
    std::vector<double> dc(2 + rng() % 3);
    for (auto& c : qc) c = u(rng);
    for (auto& c : dc) c = u(rng);
    dc.back() = 1.0 + std::abs(dc.back());
    std::vector<double> rc(dc.size() - 1);
    for (auto& c : rc) c = u(rng);
    const polynomial q(qc);
    const polynomial d(dc);
    const polynomial r(rc);
    const auto res = divide(q * d + r, d);
    for (int i = 0; i <= std::max(q.degree(), res.quotient.degree()); ++i)
      CHECK(res.quotient[i] == doctest::Approx(q[i]).epsilon(1e-10));
    for (int i = 0; i <= std::max(r.degree(), res.remainder.degree()); ++i)
      CHECK(std::abs(res.remainder[i] - r[i]) < 1e-10);
  }
  CHECK_THROWS_AS(divide(polynomial({1.0}), polynomial()), std::domain_error);
}

TEST_CASE("real_roots on simple cases") {
  const polynomial cubic = polynomial({-1.0, 1.0}) * polynomial({-2.0, 1.0}) * polynomial({-3.0, 1.0});
  auto roots = real_roots(cubic, 0.0, 4.0);
  REQUIRE(roots.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(roots[static_cast<std::size_t>(i)].value == doctest::Approx(i + 1.0).epsilon(1e-12));
    CHECK_FALSE(roots[static_cast<std::size_t>(i)].tangential);
  }

  const polynomial square = polynomial({-2.0, 1.0}) * polynomial({-2.0, 1.0});
  roots = real_roots(square, 0.0, 4.0);
  REQUIRE(roots.size() == 1);
  CHECK(roots[0].tangential);
  CHECK(roots[0].value == doctest::Approx(2.0));

  CHECK(real_roots(polynomial({1.0, 0.0, 1.0}), -5.0, 5.0).empty());
  // The range is half open: lo is excluded, hi included.
  CHECK(real_roots(polynomial({-1.0, 1.0}), 1.0, 2.0).empty());
  CHECK(real_roots(polynomial({-2.0, 1.0}), 1.0, 2.0).size() == 1);

  // Simple root next to a double root.
  const polynomial mixed = square * polynomial({-2.5, 1.0});
  roots = real_roots(mixed, 0.0, 4.0);
  REQUIRE(roots.size() == 2);
  CHECK(roots[0].tangential);
  CHECK(roots[1].value == doctest::Approx(2.5));
}

TEST_CASE("bisect") {
  const double r = bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-14);
  CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
  CHECK_THROWS_AS(bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-12), std::invalid_argument);
}

TEST_CASE("isolate_and_refine") {
  const double alpha = 10.0;
  const auto g = [alpha](double xi) { return gamma_cubic(xi, alpha); };
  const auto roots = isolate_and_refine(g, {2.0, alpha + 1.0 / alpha + 1.0}, 10000, 1e-12);
  REQUIRE(roots.size() == 2);
  for (double r : roots) CHECK(std::abs(gamma_cubic(r, alpha)) < 1e-9);

  const auto crit = isolate_and_refine(psi, {alpha_prime(), 50.0}, 10000, 1e-12);
  REQUIRE(crit.size() == 1);
  CHECK(crit[0] == doctest::Approx(6.3716).epsilon(5e-4 / 6.3716));

  CHECK(isolate_and_refine([](double x) { return x; }, {1.0, 2.0}, 100, 1e-12).empty());

  // Roots on grid points and Newton polish.
  const auto grid_hit = isolate_and_refine([](double x) { return x - 0.5; }, {0.0, 1.0}, 11, 1e-12);
  REQUIRE(grid_hit.size() == 1);
  CHECK(grid_hit[0] == 0.5);
  const auto polished = isolate_and_refine([](double x) { return std::sin(x); }, {2.0, 4.0}, 7, 1e-6,
                                           [](double x) { return std::cos(x); });
  REQUIRE(polished.size() == 1);
  CHECK(std::abs(polished[0] - M_PI) < 1e-12);

  const auto nan_fn = [](double) { return std::numeric_limits<double>::quiet_NaN(); };
  CHECK_THROWS_AS(isolate_and_refine(nan_fn, {0.0, 1.0}, 10, 1e-12), numerical_error);
}

TEST_CASE("isolate_and_refine_log spans decades") {
  const auto roots = isolate_and_refine_log([](double x) { return std::log(x) * (x - 1e3) * (x - 1e-3); },
                                            {1e-5, 1e5}, 2000, 1e-14);
  REQUIRE(roots.size() == 3);
  CHECK(roots[0] == doctest::Approx(1e-3).epsilon(1e-10));
  CHECK(roots[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(roots[2] == doctest::Approx(1e3).epsilon(1e-10));
}
