#pragma once

/**
 * @file cayley_group.hpp
 * @brief Vertices of the Cayley tree of order k as reduced words in G_k.
 *
 * G_k is the free product of k+1 copies of Z/2 with generators a_1..a_{k+1}.
 * A vertex is the reduced word reached from the root e; the word length is
 * the distance to the root. Neighbors are computed on demand, nothing is
 * stored as a graph.
 */

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wpgibbs {

/// Generator indices are 1-based: a_1..a_{k+1}.
using generator = int;

class group_word {
 public:
  /// The identity e of G_k.
  explicit group_word(int k);

  int k() const noexcept { return k_; }
  const std::vector<generator>& letters() const noexcept { return letters_; }
  std::size_t length() const noexcept { return letters_.size(); }
  bool is_identity() const noexcept { return letters_.empty(); }
  generator last_letter() const;

  std::string to_string() const;

  friend bool operator==(const group_word&, const group_word&) = default;
  friend auto operator<=>(const group_word& a, const group_word& b) {
    if (auto c = a.k_ <=> b.k_; c != 0) return c;
    return a.letters_ <=> b.letters_;
  }

 private:
  friend group_word reduce_word(int k, std::span<const generator> letters);
  int k_;
  std::vector<generator> letters_;
};

/// Index-2 normal subgroup H_A given by a nonempty proper subset A of {1..k+1}.
class subgroup_spec {
 public:
  subgroup_spec(int k, std::vector<generator> a);

  /// A = {1..a_size}, the canonical representative for a given |A|.
  static subgroup_spec first_generators(int k, int a_size);

  int k() const noexcept { return k_; }
  const std::vector<generator>& a() const noexcept { return a_; }
  int a_size() const noexcept { return static_cast<int>(a_.size()); }
  bool contains(generator i) const noexcept;

 private:
  int k_;
  std::vector<generator> a_;
  std::uint64_t mask_ = 0;
};

/// Cancels adjacent equal letters until none remain (a_i a_i = e).
group_word reduce_word(int k, std::span<const generator> letters);

group_word multiply(const group_word& w1, const group_word& w2);

std::size_t letter_count(const group_word& w, generator i);

/// True iff the total number of letters from A in w is even.
bool in_ha(const group_word& w, const subgroup_spec& spec);

/// Drops the last letter. Throws std::domain_error at the root.
group_word parent(const group_word& w);

/// Successors S(w): k words for w != e, k+1 one-letter words for the root.
std::vector<group_word> children(const group_word& w);

/// Number of vertices at distance n from the root: (k+1) k^(n-1) for n >= 1.
std::uint64_t sphere_size(int k, int n);

inline constexpr std::uint64_t default_ball_cap = std::uint64_t{1} << 22;

/// Levels W_0..W_n, each sorted lexicographically.
/// Throws resource_cap_error if a level would hold more than `cap` words.
std::vector<std::vector<group_word>> ball(int n, int k, std::uint64_t cap = default_ball_cap);

}  // namespace wpgibbs
