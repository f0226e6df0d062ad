#ifndef PAMOD_SUBSET_HPP
#define PAMOD_SUBSET_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "pamod/graph.hpp"

namespace pamod {

/// A subset S of [n] together with its mini-vertex image S~ in [hn]:
/// mini-vertex m belongs to S~ iff vertex ceil(m/h) belongs to S. With h = 1
/// the two views coincide, which is how arbitrary mini-vertex sets are
/// expressed.
class VertexSubset {
 public:
  VertexSubset() = default;
  /// Empty subset. Throws std::invalid_argument if n or h is zero.
  VertexSubset(vertex_t n, std::uint32_t h);

  static VertexSubset none(vertex_t n, std::uint32_t h) { return {n, h}; }
  static VertexSubset all(vertex_t n, std::uint32_t h);
  /// [k]; throws std::invalid_argument if k > n.
  static VertexSubset prefix(vertex_t n, std::uint32_t h, vertex_t k);
  /// Throws std::invalid_argument for ids outside [1, n].
  static VertexSubset from_ids(vertex_t n, std::uint32_t h, std::span<const vertex_t> ids);

  vertex_t universe() const noexcept { return n_; }
  std::uint32_t h() const noexcept { return h_; }
  std::uint64_t mini_universe() const noexcept { return std::uint64_t{h_} * n_; }

  bool contains(vertex_t v) const noexcept { return members_[v - 1] != 0; }
  /// delta_m: whether mini-vertex m lies in S~.
  bool contains_mini(std::uint64_t m) const noexcept { return members_[(m - 1) / h_] != 0; }

  void insert(vertex_t v) { members_.at(v - 1) = 1; }
  void erase(vertex_t v) { members_.at(v - 1) = 0; }
  void flip(vertex_t v) { members_.at(v - 1) ^= 1; }

  std::uint64_t size() const noexcept;
  std::uint64_t mini_size() const noexcept { return std::uint64_t{h_} * size(); }
  std::vector<vertex_t> ids() const;
  VertexSubset complement() const;

  /// Indicator bytes indexed by v - 1.
  std::span<const std::uint8_t> members() const noexcept { return members_; }

  friend bool operator==(const VertexSubset&, const VertexSubset&) = default;

 private:
  vertex_t n_ = 0;
  std::uint32_t h_ = 1;
  std::vector<std::uint8_t> members_;
};

}  // namespace pamod

#endif  // PAMOD_SUBSET_HPP
