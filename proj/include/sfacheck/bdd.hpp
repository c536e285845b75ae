#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sfacheck {

/// Reduced ordered binary decision diagram over `width` bits.
///
/// Variable 0 is the most significant bit. Every diagram is a self-contained
/// value: nodes are stored in a canonical depth-first post-order, so two
/// diagrams denote the same set exactly when they compare equal.
class Bdd {
 public:
  static constexpr int kFalse = 0;
  static constexpr int kTrue = 1;

  struct Node {
    unsigned var;
    int low;
    int high;
    friend bool operator==(const Node&, const Node&) = default;
  };

  static constexpr unsigned kMaxWidth = 63;

  /// Throws std::invalid_argument if width is 0 or above kMaxWidth.
  static Bdd constant(unsigned width, bool value);
  /// Diagram accepting exactly `values`; each value must be below 2^width.
  static Bdd from_values(unsigned width, std::span<const std::uint64_t> values);

  unsigned width() const { return width_; }
  bool is_false() const { return root_ == kFalse; }
  bool is_true() const { return root_ == kTrue; }
  std::size_t node_count() const { return nodes_.size(); }

  bool evaluate(std::uint64_t value) const;
  /// Smallest accepted value: the leftmost root-to-true path, free bits zero.
  std::optional<std::uint64_t> min_element() const;
  /// Accepted values in increasing order; stops after `limit` values.
  std::vector<std::uint64_t> values(std::size_t limit) const;
  /// Number of accepted values (saturates at UINT64_MAX).
  std::uint64_t count() const;

  /// Checks no node has equal children, no two nodes coincide, and
  /// variables strictly increase along every edge.
  bool is_reduced_and_ordered() const;

  Bdd operator&(const Bdd& other) const;
  Bdd operator|(const Bdd& other) const;
  Bdd operator~() const;

  std::size_t hash() const;

  friend bool operator==(const Bdd&, const Bdd&) = default;

  const std::vector<Node>& nodes() const { return nodes_; }
  int root() const { return root_; }

 private:
  Bdd(unsigned width, std::vector<Node> nodes, int root)
      : width_(width), nodes_(std::move(nodes)), root_(root) {}

  const Node& node(int ref) const { return nodes_[static_cast<std::size_t>(ref - 2)]; }

  friend class BddBuilder;

  unsigned width_ = 1;
  // Reference r >= 2 denotes nodes_[r - 2].
  std::vector<Node> nodes_;
  int root_ = kFalse;
};

}  // namespace sfacheck
