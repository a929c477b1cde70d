#pragma once

/**
 * @file gibbs_oracle.hpp
 * @brief Brute-force finite-volume checks on the tree ball V_n.
 *
 * Configurations on V_n are bitmasks over a fixed vertex order: level order,
 * lexicographic within a level (bit set = spin +1). V_{n-1} occupies the low
 * bits, so marginalising to V_{n-1} is a mask.
 */

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wpgibbs/cayley_group.hpp"
#include "wpgibbs/ising_field.hpp"

namespace wpgibbs {

class finite_volume {
 public:
  finite_volume(int k, int n, std::uint64_t cap = default_ball_cap);

  int k() const noexcept { return k_; }
  int depth() const noexcept { return n_; }
  std::size_t size() const noexcept { return words_.size(); }
  std::size_t edge_count() const noexcept { return words_.size() - 1; }
  /// Index of the first vertex of level d; level_begin(n + 1) == size().
  std::size_t level_begin(int d) const { return level_begin_.at(static_cast<std::size_t>(d)); }
  const group_word& word(std::size_t i) const { return words_.at(i); }
  /// Parent index; undefined for the root (index 0).
  std::size_t parent_index(std::size_t i) const { return parent_.at(i); }

 private:
  int k_;
  int n_;
  std::vector<group_word> words_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> level_begin_;
};

struct spin_config {
  std::uint64_t bits = 0;
  std::size_t size = 0;

  /// Throws std::invalid_argument on values other than +-1 or more than 64 sites.
  static spin_config from_spins(std::span<const int> spins);
  int spin(std::size_t i) const noexcept { return ((bits >> i) & 1U) ? 1 : -1; }
};

/// -J * sum over edges of V_n. Throws if the configuration does not cover V_n exactly.
double hamiltonian(const finite_volume& volume, const spin_config& config, double j);

struct probability_table {
  int n = 0;
  std::vector<double> prob;  ///< indexed by configuration bitmask
  double normalizer = 0.0;   ///< Z_n (may be +inf for extreme parameters; see log_normalizer)
  double log_normalizer = 0.0;
};

inline constexpr std::uint64_t default_enumeration_cap = std::uint64_t{1} << 24;

/// Exact mu_n: weights exp(J beta sum sigma sigma + sum_{x in W_n} h_x sigma(x)) over all 2^|V_n|
/// configurations. Throws resource_cap_error above `cap` configurations, std::invalid_argument for n < 1.
probability_table mu_n_table(const model_params& params, const field_quad& quad, const subgroup_spec& spec,
                             int n, std::uint64_t cap = default_enumeration_cap, int jobs = 1);

/// max over sigma on V_{n-1} of |sum_{W_n} mu_n - mu_{n-1}|; needs n >= 2.
double check_compatibility(const model_params& params, const field_quad& quad, const subgroup_spec& spec,
                           int n, std::uint64_t cap = default_enumeration_cap, int jobs = 1);

struct eq4_report {
  double max_residual = 0.0;
  /// Signed h_x - sum_{y in S(x)} f(h_y) for one vertex of each role; empty if the role does not occur.
  std::array<std::optional<double>, 4> role_residual{};
  /// Largest |residual| over the vertices of each role.
  std::array<double, 4> role_max{};
  std::array<std::size_t, 4> role_vertices{};
};

/// Recursion check on every vertex with 1 <= |x| <= depth - 1. Needs depth >= 2.
eq4_report check_eq4(const field_quad& quad, const model_params& params, const subgroup_spec& spec, int depth);

namespace reference {

probability_table mu_n_table(const model_params& params, const field_quad& quad, const subgroup_spec& spec,
                             int n, std::uint64_t cap = default_enumeration_cap);

}  // namespace reference

}  // namespace wpgibbs
