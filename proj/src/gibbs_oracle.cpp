#include "wpgibbs/gibbs_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include <omp.h>

#include "wpgibbs/errors.hpp"

namespace wpgibbs {

finite_volume::finite_volume(int k, int n, std::uint64_t cap) : k_(k), n_(n) {
  if (n < 0) throw std::invalid_argument("volume depth must be nonnegative");
  auto levels = ball(n, k, cap);
  std::map<std::vector<generator>, std::size_t> index;
  for (auto& level : levels) {
    level_begin_.push_back(words_.size());
    for (auto& w : level) {
      index.emplace(w.letters(), words_.size());
      words_.push_back(std::move(w));
    }
  }
  level_begin_.push_back(words_.size());
  parent_.assign(words_.size(), 0);
  for (std::size_t i = 1; i < words_.size(); ++i) parent_[i] = index.at(parent(words_[i]).letters());
}

spin_config spin_config::from_spins(std::span<const int> spins) {
  if (spins.size() > 64) throw std::invalid_argument("at most 64 sites fit a bitmask configuration");
  spin_config c;
  c.size = spins.size();
  for (std::size_t i = 0; i < spins.size(); ++i) {
    if (spins[i] == 1) {
      c.bits |= std::uint64_t{1} << i;
    } else if (spins[i] != -1) {
      throw std::invalid_argument("spins take values in {-1, +1}");
    }
  }
  return c;
}

double hamiltonian(const finite_volume& volume, const spin_config& config, double j) {
  if (config.size != volume.size()) {
    throw std::invalid_argument("configuration covers " + std::to_string(config.size) + " sites, volume has " +
                                std::to_string(volume.size()));
  }
  double aligned = 0.0;
  for (std::size_t i = 1; i < volume.size(); ++i) {
    aligned += config.spin(i) * config.spin(volume.parent_index(i));
  }
  return -j * aligned;
}

namespace {

struct enumeration_setup {
  finite_volume volume;
  std::vector<double> boundary_field;  // h_x for x in W_n, in volume order
  std::size_t boundary_begin;
  double coupling;
  std::uint64_t configs;
};

enumeration_setup prepare(const model_params& params, const field_quad& quad, const subgroup_spec& spec, int n,
                          std::uint64_t cap) {
  if (n < 1) throw std::invalid_argument("mu_n needs n >= 1 (boundary vertices need a parent)");
  if (spec.k() != params.k()) throw std::invalid_argument("subgroup and parameters use different k");
  finite_volume volume(params.k(), n);
  const std::size_t sites = volume.size();
  if (sites >= 64 || (std::uint64_t{1} << sites) > cap) {
    throw resource_cap_error("enumeration over " + std::to_string(sites) + " sites exceeds the cap of " +
                             std::to_string(cap) + " configurations");
  }
  const std::size_t b = volume.level_begin(n);
  std::vector<double> field;
  for (std::size_t i = b; i < sites; ++i) field.push_back(assign_field(volume.word(i), spec, quad));
  return {std::move(volume), std::move(field), b, params.coupling(), std::uint64_t{1} << sites};
}

double log_weight(const enumeration_setup& s, std::uint64_t bits) {
  const auto spin = [bits](std::size_t i) { return ((bits >> i) & 1U) ? 1.0 : -1.0; };
  double bonds = 0.0;
  for (std::size_t i = 1; i < s.volume.size(); ++i) bonds += spin(i) * spin(s.volume.parent_index(i));
  double field = 0.0;
  for (std::size_t i = 0; i < s.boundary_field.size(); ++i) field += s.boundary_field[i] * spin(s.boundary_begin + i);
  return s.coupling * bonds + field;
}

// Balanced tree down to single terms: for power-of-two lengths the sum of a
// reversed array is bit-identical, which the spin-flip symmetry relies on.
double pairwise_sum(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  if (xs.size() == 1) return xs[0];
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

// `weights` holds exp(logw - shift) with shift the largest log-weight.
probability_table finish(int n, std::vector<double> weights, double shift, double total) {
  probability_table t;
  t.n = n;
  t.log_normalizer = shift + std::log(total);
  t.normalizer = std::exp(t.log_normalizer);
  for (double& w : weights) w /= total;
  t.prob = std::move(weights);
  return t;
}

}  // namespace

probability_table mu_n_table(const model_params& params, const field_quad& quad, const subgroup_spec& spec, int n,
                             std::uint64_t cap, int jobs) {
  const auto s = prepare(params, quad, spec, n, cap);
  std::vector<double> weights(static_cast<std::size_t>(s.configs));
  // Fixed block partition: partial results depend on the blocks only, not on the worker count.
  const std::int64_t block = 1024;
  const std::int64_t configs = static_cast<std::int64_t>(s.configs);
  const std::int64_t blocks = (configs + block - 1) / block;
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
  const int workers = std::max(1, jobs);
#pragma omp parallel for num_threads(workers) schedule(static)
  for (std::int64_t b = 0; b < blocks; ++b) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::int64_t c = b * block; c < std::min(configs, (b + 1) * block); ++c) {
      weights[static_cast<std::size_t>(c)] = log_weight(s, static_cast<std::uint64_t>(c));
      m = std::max(m, weights[static_cast<std::size_t>(c)]);
    }
    partial[static_cast<std::size_t>(b)] = m;
  }
  const double shift = *std::max_element(partial.begin(), partial.end());
#pragma omp parallel for num_threads(workers) schedule(static)
  for (std::int64_t b = 0; b < blocks; ++b) {
    const std::int64_t end = std::min(configs, (b + 1) * block);
    for (std::int64_t c = b * block; c < end; ++c) {
      auto& w = weights[static_cast<std::size_t>(c)];
      w = std::exp(w - shift);
    }
    partial[static_cast<std::size_t>(b)] = pairwise_sum(std::span<const double>(weights).subspan(
        static_cast<std::size_t>(b * block), static_cast<std::size_t>(end - b * block)));
  }
  return finish(n, std::move(weights), shift, pairwise_sum(partial));
}

double check_compatibility(const model_params& params, const field_quad& quad, const subgroup_spec& spec, int n,
                           std::uint64_t cap, int jobs) {
  if (n < 2) throw std::invalid_argument("compatibility is checked for n >= 2 only");
  const auto big = mu_n_table(params, quad, spec, n, cap, jobs);
  const auto small = mu_n_table(params, quad, spec, n - 1, cap, jobs);
  std::vector<double> marginal(small.prob.size(), 0.0);
  const std::uint64_t mask = small.prob.size() - 1;
  for (std::size_t c = 0; c < big.prob.size(); ++c) marginal[c & mask] += big.prob[c];
  double worst = 0.0;
  for (std::size_t c = 0; c < marginal.size(); ++c) worst = std::max(worst, std::abs(marginal[c] - small.prob[c]));
  return worst;
}

eq4_report check_eq4(const field_quad& quad, const model_params& params, const subgroup_spec& spec, int depth) {
  if (depth < 2) throw std::invalid_argument("the recursion check needs depth >= 2");
  if (spec.k() != params.k()) throw std::invalid_argument("subgroup and parameters use different k");
  eq4_report report;
  const auto levels = ball(depth - 1, params.k());
  for (std::size_t d = 1; d < levels.size(); ++d) {
    for (const auto& x : levels[d]) {
      const int role = field_role(x, spec);
      double sum = 0.0;
      for (const auto& y : children(x)) sum += f_field(assign_field(y, spec, quad), params.theta());
      const double r = quad[static_cast<std::size_t>(role)] - sum;
      auto& slot = report.role_residual[static_cast<std::size_t>(role)];
      if (!slot) slot = r;
      report.role_max[static_cast<std::size_t>(role)] = std::max(report.role_max[static_cast<std::size_t>(role)], std::abs(r));
      ++report.role_vertices[static_cast<std::size_t>(role)];
      report.max_residual = std::max(report.max_residual, std::abs(r));
    }
  }
  return report;
}

namespace reference {

probability_table mu_n_table(const model_params& params, const field_quad& quad, const subgroup_spec& spec, int n,
                             std::uint64_t cap) {
  const auto s = prepare(params, quad, spec, n, cap);
  std::vector<double> weights(static_cast<std::size_t>(s.configs));
  double shift = -std::numeric_limits<double>::infinity();
  for (std::uint64_t c = 0; c < s.configs; ++c) {
    weights[c] = log_weight(s, c);
    shift = std::max(shift, weights[c]);
  }
  double total = 0.0;
  for (double& w : weights) {
    w = std::exp(w - shift);
    total += w;
  }
  return finish(n, std::move(weights), shift, total);
}

}  // namespace reference

}  // namespace wpgibbs
