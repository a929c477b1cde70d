#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "wpgibbs/errors.hpp"
#include "wpgibbs/gibbs_oracle.hpp"
#include "wpgibbs/reduction.hpp"
#include "wpgibbs/solvers.hpp"

using namespace wpgibbs;

namespace {

spin_config all_up(std::size_t n) {
  std::vector<int> s(n, 1);
  return spin_config::from_spins(s);
}

// Scalar TI root on the positive side, by plain bisection.
double ti_root(int k, double theta) {
  double lo = 1e-6;
  double hi = 30.0;
  auto g = [&](double h) { return h - k * f_field(h, theta); };
  for (int i = 0; i < 300; ++i) {
    const double m = 0.5 * (lo + hi);
    (g(lo) * g(m) <= 0.0 ? hi : lo) = m;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("finite volume layout") {
  const finite_volume v(2, 2);
  CHECK(v.size() == 10);
  CHECK(v.edge_count() == 9);
  CHECK(v.level_begin(0) == 0);
  CHECK(v.level_begin(1) == 1);
  CHECK(v.level_begin(2) == 4);
  CHECK(v.level_begin(3) == 10);
  for (std::size_t i = 1; i < v.size(); ++i) CHECK(v.word(v.parent_index(i)) == parent(v.word(i)));
  CHECK(v.word(4).letters() == std::vector<generator>{1, 2});
}

TEST_CASE("hamiltonian") {
  const double j = 0.7;
  const finite_volume v1(2, 1);
  CHECK(hamiltonian(v1, all_up(4), j) == doctest::Approx(-3 * j));
  CHECK(hamiltonian(v1, spin_config::from_spins(std::vector<int>{-1, 1, 1, 1}), j) == doctest::Approx(3 * j));
  const finite_volume v2(2, 2);
  CHECK(hamiltonian(v2, all_up(10), j) == doctest::Approx(-9 * j));
  CHECK_THROWS_AS(hamiltonian(v2, all_up(4), j), std::invalid_argument);
  CHECK_THROWS_AS(spin_config::from_spins(std::vector<int>{1, 0}), std::invalid_argument);
}

TEST_CASE("mu_n basic properties") {
  const subgroup_spec spec = subgroup_spec::first_generators(2, 1);
  // J = 0, zero field: uniform.
  const auto free = model_params::from_coupling(2, 1, 0.0, 1.0);
  const auto uni = mu_n_table(free, {0, 0, 0, 0}, spec, 2);
  REQUIRE(uni.prob.size() == 1024u);
  for (double pr : uni.prob) CHECK(pr == doctest::Approx(1.0 / 1024.0).epsilon(1e-14));

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const auto p = model_params::from_alpha(2, 1, 0.4);
  for (int trial = 0; trial < 5; ++trial) {
    const field_quad q{u(rng), u(rng), u(rng), u(rng)};
    const auto t = mu_n_table(p, q, spec, 2);
    double sum = 0.0;
    for (double pr : t.prob) {
      CHECK(pr >= 0.0);
      sum += pr;
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
    CHECK(t.normalizer > 0.0);
    CHECK(std::isfinite(t.log_normalizer));

    // Global flip: mu(-q)(sigma) == mu(q)(-sigma) exactly.
    const auto flipped = mu_n_table(p, negate(q), spec, 2);
    const std::uint64_t all = (std::uint64_t{1} << 10) - 1;
    for (std::uint64_t c = 0; c < 1024; ++c) CHECK(flipped.prob[c] == t.prob[all ^ c]);
  }

  // Root marginal at zero field.
  const auto t0 = mu_n_table(p, {0, 0, 0, 0}, spec, 2);
  double up = 0.0;
  for (std::uint64_t c = 0; c < 1024; ++c)
    if (c & 1U) up += t0.prob[c];
  CHECK(up == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("mu_n matches a direct weight computation") {
  // Independent evaluation through hamiltonian() and assign_field().
  const auto p = model_params::from_coupling(2, 1, 0.3, 1.5);
  const subgroup_spec spec(2, {2});
  const field_quad q{0.2, -0.4, 0.9, -0.1};
  const finite_volume v(2, 2);
  const auto t = mu_n_table(p, q, spec, 2);
  std::vector<double> w(1024);
  double z = 0.0;
  for (std::uint64_t c = 0; c < 1024; ++c) {
    const spin_config s{c, 10};
    double e = -*p.beta() * hamiltonian(v, s, *p.j());
    for (std::size_t i = v.level_begin(2); i < v.size(); ++i) e += assign_field(v.word(i), spec, q) * s.spin(i);
    w[c] = std::exp(e);
    z += w[c];
  }
  for (std::uint64_t c = 0; c < 1024; ++c) CHECK(t.prob[c] == doctest::Approx(w[c] / z).epsilon(1e-12));
  CHECK(t.normalizer == doctest::Approx(z).epsilon(1e-12));
}

TEST_CASE("enumeration guards") {
  const auto p = model_params::from_alpha(2, 1, 0.4);
  const auto spec = subgroup_spec::first_generators(2, 1);
  CHECK_THROWS_AS(mu_n_table(p, {0, 0, 0, 0}, spec, 0), std::invalid_argument);
  CHECK_THROWS_AS(mu_n_table(p, {0, 0, 0, 0}, spec, 2, 512), resource_cap_error);
  CHECK_THROWS_AS(mu_n_table(model_params::from_alpha(4, 1, 0.4), {0, 0, 0, 0}, subgroup_spec::first_generators(4, 1), 3),
                  resource_cap_error);
  CHECK_THROWS_AS(check_compatibility(p, {0, 0, 0, 0}, spec, 1), std::invalid_argument);
}

TEST_CASE("compatibility") {
  const auto spec = subgroup_spec::first_generators(2, 1);
  for (double t : {-0.6, 0.1, 0.5})
    CHECK(check_compatibility(model_params::from_theta(2, 1, t), {0, 0, 0, 0}, spec, 2) < 1e-12);

  const auto p = model_params::from_alpha(2, 1, 0.2);
  const double hs = ti_root(2, p.theta());
  CHECK(hs > 0.1);
  CHECK(check_compatibility(p, {hs, hs, hs, hs}, spec, 2) < 1e-10);
  CHECK(check_compatibility(p, {-hs, -hs, -hs, -hs}, spec, 2) < 1e-10);
  CHECK(check_compatibility(p, {1, 1, 1, 1}, spec, 2) > 1e-4);

  // Weakly periodic solutions from the solver are compatible too.
  for (int a : {1, 2}) {
    const auto pa = model_params::from_alpha(2, a, 0.1);
    const auto sa = subgroup_spec::first_generators(2, a);
    for (const auto& r : solve_full_system(pa).records) CHECK(check_compatibility(pa, r.h, sa, 2) < 1e-10);
  }
  const auto p3 = model_params::from_alpha(3, 1, 0.1);
  for (const auto& r : solve_full_system(p3).records)
    CHECK(check_compatibility(p3, r.h, subgroup_spec::first_generators(3, 1), 2) < 1e-10);
}

TEST_CASE("recursion check") {
  const auto p = model_params::from_alpha(4, 4, 10.0);
  const auto spec = subgroup_spec::first_generators(4, 4);
  CHECK(check_eq4({0, 0, 0, 0}, p, spec, 4).max_residual == 0.0);
  CHECK_THROWS_AS(check_eq4({0, 0, 0, 0}, p, spec, 1), std::invalid_argument);

  for (const auto& r : count_i3_solutions(4, 10.0).records) CHECK(check_eq4(r.h, p, spec, 4).max_residual < 1e-9);

  // Per-role residuals are the components of h - W(h).
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 3);
    const int a = 1 + static_cast<int>(rng() % static_cast<unsigned>(k));
    const auto pk = model_params::from_alpha(k, a, std::exp(u(rng)));
    const auto sk = subgroup_spec::first_generators(k, a);
    const field_quad q{u(rng), u(rng), u(rng), u(rng)};
    const auto rep = check_eq4(q, pk, sk, 4);
    const auto w = w_map(q, pk);
    for (int role = 0; role < 4; ++role) {
      REQUIRE(rep.role_residual[static_cast<std::size_t>(role)].has_value());
      CHECK(std::abs(*rep.role_residual[static_cast<std::size_t>(role)] - (q[role] - w[role])) < 1e-12);
      CHECK(rep.role_max[static_cast<std::size_t>(role)] ==
            doctest::Approx(std::abs(q[role] - w[role])).epsilon(1e-12));
    }
    CHECK(rep.max_residual == doctest::Approx(fixed_point_residual(q, pk)).epsilon(1e-12));
  }
}

TEST_CASE("small recursion residual implies small compatibility discrepancy") {
  // C = discrepancy / residual stays bounded as the field approaches a solution.
  const auto p = model_params::from_alpha(2, 1, 0.2);
  const auto spec = subgroup_spec::first_generators(2, 1);
  const double hs = ti_root(2, p.theta());
  double ratio_max = 0.0;
  for (double eps : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const field_quad q{hs + eps, hs, hs - eps, hs};
    const double res = check_eq4(q, p, spec, 3).max_residual;
    const double disc = check_compatibility(p, q, spec, 2);
    ratio_max = std::max(ratio_max, disc / res);
  }
  CHECK(ratio_max < 10.0);
}
