#include "sfacheck/bdd.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace sfacheck {

// Scratch space for building diagrams. Hash-consing keeps every node unique
// and canonicalize() renumbers the reachable part into the stored form.
class BddBuilder {
 public:
  explicit BddBuilder(unsigned width) : width_(width) {}

  int make(unsigned var, int low, int high) {
    if (low == high) return low;
    auto key = std::make_tuple(var, low, high);
    auto it = unique_.find(key);
    if (it != unique_.end()) return it->second;
    nodes_.push_back({var, low, high});
    int ref = static_cast<int>(nodes_.size()) + 1;
    unique_.emplace(key, ref);
    return ref;
  }

  // Copies the diagram of `b` into the builder and returns its root.
  int import(const Bdd& b) {
    std::vector<int> map(b.nodes_.size());
    for (std::size_t i = 0; i < b.nodes_.size(); ++i) {
      const auto& n = b.nodes_[i];
      map[i] = make(n.var, remap(map, n.low), remap(map, n.high));
    }
    return remap(map, b.root_);
  }

  unsigned var_of(int ref) const {
    return ref < 2 ? width_ : nodes_[static_cast<std::size_t>(ref - 2)].var;
  }
  int low_of(int ref) const { return nodes_[static_cast<std::size_t>(ref - 2)].low; }
  int high_of(int ref) const { return nodes_[static_cast<std::size_t>(ref - 2)].high; }

  Bdd canonicalize(int root) const {
    std::vector<Bdd::Node> out;
    std::unordered_map<int, int> renum;
    std::function<int(int)> visit = [&](int ref) -> int {
      if (ref < 2) return ref;
      auto it = renum.find(ref);
      if (it != renum.end()) return it->second;
      const auto& n = nodes_[static_cast<std::size_t>(ref - 2)];
      int lo = visit(n.low);
      int hi = visit(n.high);
      out.push_back({n.var, lo, hi});
      int id = static_cast<int>(out.size()) + 1;
      renum.emplace(ref, id);
      return id;
    };
    int r = visit(root);
    return Bdd(width_, std::move(out), r);
  }

 private:
  static int remap(const std::vector<int>& map, int ref) {
    return ref < 2 ? ref : map[static_cast<std::size_t>(ref - 2)];
  }

  unsigned width_;
  std::vector<Bdd::Node> nodes_;
  std::map<std::tuple<unsigned, int, int>, int> unique_;
};

namespace {

void check_width(unsigned width) {
  if (width == 0 || width > Bdd::kMaxWidth)
    throw std::invalid_argument("bitvector width must be in 1.." + std::to_string(Bdd::kMaxWidth));
}

enum class Op { conj, disj };

int apply(BddBuilder& b, Op op, int x, int y, std::map<std::pair<int, int>, int>& memo) {
  if (op == Op::conj) {
    if (x == Bdd::kFalse || y == Bdd::kFalse) return Bdd::kFalse;
    if (x == Bdd::kTrue) return y;
    if (y == Bdd::kTrue) return x;
  } else {
    if (x == Bdd::kTrue || y == Bdd::kTrue) return Bdd::kTrue;
    if (x == Bdd::kFalse) return y;
    if (y == Bdd::kFalse) return x;
  }
  if (x == y) return x;
  auto key = std::minmax(x, y);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  unsigned vx = b.var_of(x);
  unsigned vy = b.var_of(y);
  unsigned v = std::min(vx, vy);
  int xl = vx == v ? b.low_of(x) : x;
  int xh = vx == v ? b.high_of(x) : x;
  int yl = vy == v ? b.low_of(y) : y;
  int yh = vy == v ? b.high_of(y) : y;
  int lo = apply(b, op, xl, yl, memo);
  int hi = apply(b, op, xh, yh, memo);
  int r = b.make(v, lo, hi);
  memo.emplace(key, r);
  return r;
}

Bdd binary(const Bdd& a, const Bdd& b, Op op) {
  BddBuilder builder(a.width());
  int ra = builder.import(a);
  int rb = builder.import(b);
  std::map<std::pair<int, int>, int> memo;
  return builder.canonicalize(apply(builder, op, ra, rb, memo));
}

}  // namespace

Bdd Bdd::constant(unsigned width, bool value) {
  check_width(width);
  return Bdd(width, {}, value ? kTrue : kFalse);
}

Bdd Bdd::from_values(unsigned width, std::span<const std::uint64_t> values) {
  check_width(width);
  std::vector<std::uint64_t> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const std::uint64_t limit = std::uint64_t{1} << width;
  if (!sorted.empty() && sorted.back() >= limit)
    throw std::invalid_argument("value " + std::to_string(sorted.back()) + " does not fit in " +
                                std::to_string(width) + " bits");
  BddBuilder builder(width);
  // Builds the diagram for the sorted range [first, last) whose members all
  // share the bits above `var`.
  std::function<int(unsigned, std::size_t, std::size_t)> build =
      [&](unsigned var, std::size_t first, std::size_t last) -> int {
    if (first == last) return kFalse;
    if (var == width) return kTrue;
    const std::uint64_t bit = std::uint64_t{1} << (width - 1 - var);
    std::size_t mid = first;
    while (mid < last && (sorted[mid] & bit) == 0) ++mid;
    int lo = build(var + 1, first, mid);
    int hi = build(var + 1, mid, last);
    return builder.make(var, lo, hi);
  };
  return builder.canonicalize(build(0, 0, sorted.size()));
}

bool Bdd::evaluate(std::uint64_t value) const {
  int ref = root_;
  while (ref >= 2) {
    const Node& n = node(ref);
    bool bit = (value >> (width_ - 1 - n.var)) & 1U;
    ref = bit ? n.high : n.low;
  }
  return ref == kTrue;
}

std::optional<std::uint64_t> Bdd::min_element() const {
  if (root_ == kFalse) return std::nullopt;
  std::uint64_t value = 0;
  int ref = root_;
  // In a reduced diagram every internal node reaches true, so the low edge
  // is taken unless it is the false terminal.
  while (ref >= 2) {
    const Node& n = node(ref);
    if (n.low != kFalse) {
      ref = n.low;
    } else {
      value |= std::uint64_t{1} << (width_ - 1 - n.var);
      ref = n.high;
    }
  }
  return value;
}

std::vector<std::uint64_t> Bdd::values(std::size_t limit) const {
  std::vector<std::uint64_t> out;
  std::function<void(int, unsigned, std::uint64_t)> walk = [&](int ref, unsigned var,
                                                                std::uint64_t prefix) {
    if (out.size() >= limit || ref == kFalse) return;
    if (var == width_) {
      out.push_back(prefix);
      return;
    }
    const std::uint64_t bit = std::uint64_t{1} << (width_ - 1 - var);
    if (ref >= 2 && node(ref).var == var) {
      walk(node(ref).low, var + 1, prefix);
      walk(node(ref).high, var + 1, prefix | bit);
    } else {
      walk(ref, var + 1, prefix);
      walk(ref, var + 1, prefix | bit);
    }
  };
  walk(root_, 0, 0);
  return out;
}

std::uint64_t Bdd::count() const {
  std::unordered_map<int, long double> memo;
  // Number of accepted assignments of variables var..width-1.
  std::function<long double(int, unsigned)> go = [&](int ref, unsigned var) -> long double {
    if (ref == kFalse) return 0.0L;
    if (ref == kTrue) return static_cast<long double>(std::uint64_t{1} << (width_ - var));
    const Node& n = node(ref);
    long double below;
    auto it = memo.find(ref);
    if (it != memo.end()) {
      below = it->second;
    } else {
      below = go(n.low, n.var + 1) + go(n.high, n.var + 1);
      memo.emplace(ref, below);
    }
    return below * static_cast<long double>(std::uint64_t{1} << (n.var - var));
  };
  long double total = go(root_, 0);
  if (total >= 18446744073709551615.0L) return UINT64_MAX;
  return static_cast<std::uint64_t>(total);
}

bool Bdd::is_reduced_and_ordered() const {
  std::map<std::tuple<unsigned, int, int>, int> seen;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.var >= width_ || n.low == n.high) return false;
    for (int child : {n.low, n.high}) {
      if (child >= 2) {
        if (static_cast<std::size_t>(child - 2) >= i) return false;
        if (node(child).var <= n.var) return false;
      }
    }
    if (!seen.emplace(std::make_tuple(n.var, n.low, n.high), 0).second) return false;
  }
  return true;
}

Bdd Bdd::operator&(const Bdd& other) const {
  if (width_ != other.width_) throw std::invalid_argument("bitvector width mismatch");
  return binary(*this, other, Op::conj);
}

Bdd Bdd::operator|(const Bdd& other) const {
  if (width_ != other.width_) throw std::invalid_argument("bitvector width mismatch");
  return binary(*this, other, Op::disj);
}

Bdd Bdd::operator~() const {
  auto flip = [](int ref) { return ref == kFalse ? kTrue : ref == kTrue ? kFalse : ref; };
  std::vector<Node> nodes = nodes_;
  for (auto& n : nodes) {
    n.low = flip(n.low);
    n.high = flip(n.high);
  }
  return Bdd(width_, std::move(nodes), flip(root_));
}

std::size_t Bdd::hash() const {
  std::size_t h = std::hash<unsigned>{}(width_) ^ (std::hash<int>{}(root_) << 1);
  for (const auto& n : nodes_) {
    h = h * 1000003U ^ (n.var * 31U + static_cast<unsigned>(n.low) * 131U +
                        static_cast<unsigned>(n.high) * 8191U);
  }
  return h;
}

}  // namespace sfacheck
