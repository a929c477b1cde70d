#include "wpgibbs/cayley_group.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "wpgibbs/errors.hpp"

namespace wpgibbs {

namespace {

void check_order(int k) {
  if (k < 1 || k > 62) throw std::invalid_argument("tree order k must be in [1, 62]");
}

void check_generator(int k, generator i) {
  if (i < 1 || i > k + 1) {
    throw std::out_of_range("generator index " + std::to_string(i) + " outside 1.." +
                            std::to_string(k + 1));
  }
}

}  // namespace

group_word::group_word(int k) : k_(k) { check_order(k); }

generator group_word::last_letter() const {
  if (letters_.empty()) throw std::domain_error("identity word has no last letter");
  return letters_.back();
}

std::string group_word::to_string() const {
  if (letters_.empty()) return "e";
  std::ostringstream os;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) os << ' ';
    os << 'a' << letters_[i];
  }
  return os.str();
}

subgroup_spec::subgroup_spec(int k, std::vector<generator> a) : k_(k), a_(std::move(a)) {
  check_order(k);
  std::sort(a_.begin(), a_.end());
  a_.erase(std::unique(a_.begin(), a_.end()), a_.end());
  if (a_.empty()) throw std::invalid_argument("A must be nonempty");
  for (generator i : a_) {
    check_generator(k, i);
    mask_ |= std::uint64_t{1} << i;
  }
  if (static_cast<int>(a_.size()) > k) {
    throw std::invalid_argument("A must be a proper subset of {1..k+1} (|A| <= k)");
  }
}

subgroup_spec subgroup_spec::first_generators(int k, int a_size) {
  if (a_size < 1 || a_size > k) throw std::invalid_argument("|A| must be in [1, k]");
  std::vector<generator> a(static_cast<std::size_t>(a_size));
  for (int i = 0; i < a_size; ++i) a[static_cast<std::size_t>(i)] = i + 1;
  return subgroup_spec(k, std::move(a));
}

bool subgroup_spec::contains(generator i) const noexcept {
  return i >= 1 && i <= k_ + 1 && ((mask_ >> i) & 1U);
}

group_word reduce_word(int k, std::span<const generator> letters) {
  group_word w(k);
  // Stack reduction: the free product has a unique normal form, so one pass suffices.
  for (generator i : letters) {
    check_generator(k, i);
    if (!w.letters_.empty() && w.letters_.back() == i) {
      w.letters_.pop_back();
    } else {
      w.letters_.push_back(i);
    }
  }
  return w;
}

group_word multiply(const group_word& w1, const group_word& w2) {
  if (w1.k() != w2.k()) throw std::invalid_argument("words belong to different groups");
  std::vector<generator> joined(w1.letters());
  joined.insert(joined.end(), w2.letters().begin(), w2.letters().end());
  return reduce_word(w1.k(), joined);
}

std::size_t letter_count(const group_word& w, generator i) {
  return static_cast<std::size_t>(std::count(w.letters().begin(), w.letters().end(), i));
}

bool in_ha(const group_word& w, const subgroup_spec& spec) {
  if (w.k() != spec.k()) throw std::invalid_argument("word and subgroup use different k");
  std::size_t parity = 0;
  for (generator i : w.letters()) parity ^= spec.contains(i) ? 1U : 0U;
  return parity == 0;
}

group_word parent(const group_word& w) {
  if (w.is_identity()) throw std::domain_error("the root vertex has no parent");
  std::vector<generator> letters(w.letters().begin(), w.letters().end() - 1);
  return reduce_word(w.k(), letters);
}

std::vector<group_word> children(const group_word& w) {
  std::vector<group_word> out;
  const int k = w.k();
  out.reserve(static_cast<std::size_t>(k + 1));
  std::vector<generator> buf(w.letters());
  buf.push_back(0);
  for (generator i = 1; i <= k + 1; ++i) {
    if (!w.is_identity() && w.last_letter() == i) continue;
    buf.back() = i;
    out.push_back(reduce_word(k, buf));
  }
  return out;
}

std::uint64_t sphere_size(int k, int n) {
  check_order(k);
  if (n < 0) throw std::invalid_argument("depth must be nonnegative");
  if (n == 0) return 1;
  std::uint64_t size = static_cast<std::uint64_t>(k) + 1;
  for (int i = 1; i < n; ++i) {
    if (size > UINT64_MAX / static_cast<std::uint64_t>(k)) return UINT64_MAX;
    size *= static_cast<std::uint64_t>(k);
  }
  return size;
}

std::vector<std::vector<group_word>> ball(int n, int k, std::uint64_t cap) {
  const std::uint64_t widest = sphere_size(k, n);
  if (widest > cap) {
    throw resource_cap_error("ball of depth " + std::to_string(n) + " at k=" + std::to_string(k) +
                             " needs " + std::to_string(widest) + " words per level (cap " +
                             std::to_string(cap) + ")");
  }
  std::vector<std::vector<group_word>> levels;
  levels.push_back({group_word(k)});
  for (int d = 1; d <= n; ++d) {
    std::vector<group_word> next;
    next.reserve(static_cast<std::size_t>(sphere_size(k, d)));
    // Parents are sorted and children are appended in generator order, so the level stays sorted.
    for (const auto& w : levels.back()) {
      for (auto& c : children(w)) next.push_back(std::move(c));
    }
    levels.push_back(std::move(next));
  }
  return levels;
}

}  // namespace wpgibbs
