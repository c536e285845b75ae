#include "linear_solver.hpp"

#include <algorithm>

#include "sfacheck/errors.hpp"

namespace sfacheck::detail {

namespace {

using Expr = std::map<std::size_t, Int>;

// ---------------------------------------------------------------------------
// Bounded-variable simplex (general form): every row defines a slack
// s = sum(a_j x_j); all variables carry optional bounds; check() restores
// feasibility of the basic variables with Bland's rule.

class Simplex {
 public:
  explicit Simplex(std::size_t structural) : structural_(structural) {
    for (std::size_t v = 0; v < structural; ++v) add_var();
    nonbasic_.resize(structural);
    for (std::size_t v = 0; v < structural; ++v) {
      nonbasic_[v] = v;
      where_[v] = {false, v};
    }
  }

  // All rows must be added before the first check().
  void add_row(const std::map<std::size_t, Rational>& coef, const std::optional<Rational>& lo,
               const std::optional<Rational>& hi) {
    std::size_t s = add_var();
    std::vector<Rational> row(nonbasic_.size());
    Rational value = 0;
    for (const auto& [v, c] : coef) {
      row[v] = c;
      value += c * val_[v];
    }
    val_[s] = value;
    where_[s] = {true, tab_.size()};
    tab_.push_back(std::move(row));
    basic_.push_back(s);
    if (lo) set_lower(s, *lo);
    if (hi) set_upper(s, *hi);
  }

  void set_lower(std::size_t v, const Rational& b) {
    if (has_lo_[v] && lo_[v] >= b) return;
    has_lo_[v] = true;
    lo_[v] = b;
    if (has_hi_[v] && hi_[v] < b) conflict_ = true;
    if (!where_[v].basic && val_[v] < b) move_nonbasic(v, b);
  }

  void set_upper(std::size_t v, const Rational& b) {
    if (has_hi_[v] && hi_[v] <= b) return;
    has_hi_[v] = true;
    hi_[v] = b;
    if (has_lo_[v] && lo_[v] > b) conflict_ = true;
    if (!where_[v].basic && val_[v] > b) move_nonbasic(v, b);
  }

  bool check() {
    if (conflict_) return false;
    for (;;) {
      std::size_t row = tab_.size();
      std::size_t best = SIZE_MAX;
      for (std::size_t r = 0; r < tab_.size(); ++r) {
        std::size_t b = basic_[r];
        if (b < best && (below(b) || above(b))) {
          best = b;
          row = r;
        }
      }
      if (row == tab_.size()) return true;
      const bool increase = below(best);
      std::size_t col = nonbasic_.size();
      std::size_t col_var = SIZE_MAX;
      for (std::size_t c = 0; c < nonbasic_.size(); ++c) {
        const Rational& a = tab_[row][c];
        if (sgn(a) == 0) continue;
        std::size_t nb = nonbasic_[c];
        bool up_ok = !has_hi_[nb] || val_[nb] < hi_[nb];
        bool down_ok = !has_lo_[nb] || val_[nb] > lo_[nb];
        bool usable = increase ? (sgn(a) > 0 ? up_ok : down_ok) : (sgn(a) > 0 ? down_ok : up_ok);
        if (usable && nb < col_var) {
          col_var = nb;
          col = c;
        }
      }
      if (col == nonbasic_.size()) return false;
      pivot_and_update(row, col, increase ? lo_[best] : hi_[best]);
    }
  }

  const Rational& value(std::size_t v) const { return val_[v]; }

 private:
  struct Place {
    bool basic;
    std::size_t index;
  };

  std::size_t add_var() {
    val_.emplace_back(0);
    lo_.emplace_back(0);
    hi_.emplace_back(0);
    has_lo_.push_back(false);
    has_hi_.push_back(false);
    where_.push_back({false, 0});
    return val_.size() - 1;
  }

  bool below(std::size_t v) const { return has_lo_[v] && val_[v] < lo_[v]; }
  bool above(std::size_t v) const { return has_hi_[v] && val_[v] > hi_[v]; }

  void move_nonbasic(std::size_t v, const Rational& target) {
    std::size_t c = where_[v].index;
    Rational delta = target - val_[v];
    for (std::size_t r = 0; r < tab_.size(); ++r)
      if (sgn(tab_[r][c]) != 0) val_[basic_[r]] += tab_[r][c] * delta;
    val_[v] = target;
  }

  void pivot_and_update(std::size_t r, std::size_t c, const Rational& target) {
    std::size_t b = basic_[r];
    std::size_t nb = nonbasic_[c];
    Rational theta = (target - val_[b]) / tab_[r][c];
    val_[b] = target;
    val_[nb] += theta;
    for (std::size_t k = 0; k < tab_.size(); ++k)
      if (k != r && sgn(tab_[k][c]) != 0) val_[basic_[k]] += tab_[k][c] * theta;
    pivot(r, c);
  }

  void pivot(std::size_t r, std::size_t c) {
    std::vector<Rational>& row = tab_[r];
    Rational inv = 1 / row[c];
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j == c) continue;
      if (sgn(row[j]) != 0) row[j] = -row[j] * inv;
    }
    row[c] = inv;
    for (std::size_t k = 0; k < tab_.size(); ++k) {
      if (k == r) continue;
      std::vector<Rational>& other = tab_[k];
      if (sgn(other[c]) == 0) continue;
      Rational f = other[c];
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (j == c) continue;
        if (sgn(row[j]) != 0) other[j] += f * row[j];
      }
      other[c] = f * inv;
    }
    std::size_t b = basic_[r];
    std::size_t nb = nonbasic_[c];
    basic_[r] = nb;
    nonbasic_[c] = b;
    where_[nb] = {true, r};
    where_[b] = {false, c};
  }

  std::size_t structural_;
  std::vector<std::vector<Rational>> tab_;
  std::vector<std::size_t> basic_;
  std::vector<std::size_t> nonbasic_;
  std::vector<Rational> val_, lo_, hi_;
  std::vector<bool> has_lo_, has_hi_;
  std::vector<Place> where_;
  bool conflict_ = false;
};

// ---------------------------------------------------------------------------
// Equality elimination.

void add_scaled(Expr& target, Int& target_const, const Expr& src, const Int& src_const, const Int& factor) {
  for (const auto& [v, c] : src) {
    Int& slot = target[v];
    slot += factor * c;
    if (slot == 0) target.erase(v);
  }
  target_const += factor * src_const;
}

// Replaces variable x in (e, k) by (sub, sub_const).
void substitute(Expr& e, Int& k, std::size_t x, const Expr& sub, const Int& sub_const) {
  auto it = e.find(x);
  if (it == e.end()) return;
  Int factor = it->second;
  e.erase(it);
  add_scaled(e, k, sub, sub_const, factor);
}

struct Reduced {
  bool infeasible = false;
  // Remaining variables in increasing id order; their dense index is the
  // position in this vector.
  std::vector<std::size_t> vars;
  std::vector<Int> box;  // |x| <= box[i] for vars[i]
  std::vector<LinearConstraint> inequalities;
  // Affine form of each original variable over the remaining ones.
  std::vector<std::pair<Expr, Int>> originals;
};

Int max_magnitude(const IntegerProblem& p) {
  Int a = 1;
  for (const auto& c : p.constraints) {
    a = std::max(a, Int(abs(c.constant)));
    for (const auto& [v, k] : c.coef) a = std::max(a, Int(abs(k)));
  }
  return a;
}

Int problem_bound(const IntegerProblem& p) {
  return small_model_bound(p.num_vars, p.constraints.size(), max_magnitude(p));
}

// Boxes every original variable by `box` and derives boxes for the fresh
// variables of the equality elimination.
Reduced reduce(const IntegerProblem& p, const Int& box) {
  Reduced out;
  const std::size_t n = p.num_vars;
  std::vector<LinearConstraint> eqs, ineqs;
  for (const auto& c : p.constraints) (c.equality ? eqs : ineqs).push_back(c);

  std::vector<Int> bound(n, box);
  std::map<std::size_t, std::pair<Expr, Int>> eliminated;
  std::size_t next_var = n;

  auto apply_everywhere = [&](std::size_t x, const Expr& sub, const Int& sub_const) {
    for (auto& c : eqs) substitute(c.coef, c.constant, x, sub, sub_const);
    for (auto& c : ineqs) substitute(c.coef, c.constant, x, sub, sub_const);
    for (auto& [v, e] : eliminated) substitute(e.first, e.second, x, sub, sub_const);
    eliminated[x] = {sub, sub_const};
  };

  while (!eqs.empty()) {
    LinearConstraint& e = eqs.front();
    if (e.coef.empty()) {
      if (e.constant != 0) {
        out.infeasible = true;
        return out;
      }
      eqs.erase(eqs.begin());
      continue;
    }
    Int g = 0;
    for (const auto& [v, c] : e.coef) g = gcd(g, c);
    if (euclid_mod(e.constant, g) != 0) {
      out.infeasible = true;
      return out;
    }
    if (g != 1) {
      for (auto& [v, c] : e.coef) c /= g;
      e.constant /= g;
    }
    std::optional<std::size_t> unit;
    std::size_t smallest = e.coef.begin()->first;
    for (const auto& [v, c] : e.coef) {
      if (!unit && abs(c) == 1) unit = v;
      if (abs(c) < abs(e.coef.at(smallest))) smallest = v;
    }
    if (unit) {
      const std::size_t x = *unit;
      const Int a = e.coef.at(x);  // +-1
      Expr sub;
      for (const auto& [v, c] : e.coef)
        if (v != x) sub[v] = -a * c;
      Int sub_const = -a * e.constant;
      eqs.erase(eqs.begin());
      apply_everywhere(x, sub, sub_const);
      continue;
    }
    // x_k := t - sum_{i != k} floor(a_i / a_k) x_i shrinks all other
    // coefficients below |a_k|.
    const std::size_t k = smallest;
    const Int ak = e.coef.at(k);
    const std::size_t t = next_var++;
    Int bt = bound[k];
    Expr sub{{t, 1}};
    for (const auto& [v, c] : e.coef) {
      if (v == k) continue;
      Int q = floor_div(c, ak);
      if (q != 0) {
        sub[v] = -q;
        bt += abs(q) * bound[v];
      }
    }
    bound.push_back(bt);
    apply_everywhere(k, sub, Int(0));
  }

  std::vector<bool> gone(next_var, false);
  for (const auto& [v, e] : eliminated) gone[v] = true;
  std::map<std::size_t, std::size_t> dense;
  for (std::size_t v = 0; v < next_var; ++v) {
    if (gone[v]) continue;
    dense[v] = out.vars.size();
    out.vars.push_back(v);
    out.box.push_back(bound[v]);
  }
  auto to_dense = [&](const Expr& e) {
    Expr d;
    for (const auto& [v, c] : e) d[dense.at(v)] = c;
    return d;
  };
  for (auto& c : ineqs) out.inequalities.push_back({to_dense(c.coef), c.constant, false});
  out.originals.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    auto it = eliminated.find(v);
    if (it == eliminated.end()) {
      out.originals[v] = {Expr{{dense.at(v), 1}}, Int(0)};
    } else {
      out.originals[v] = {to_dense(it->second.first), it->second.second};
    }
  }
  return out;
}

// Normalizes the inequalities and loads them into a simplex. Returns
// nothing when a constant constraint is violated.
std::optional<Simplex> build_simplex(const Reduced& red) {
  Simplex sx(red.vars.size());
  for (std::size_t i = 0; i < red.vars.size(); ++i) {
    sx.set_lower(i, Rational(-red.box[i]));
    sx.set_upper(i, Rational(red.box[i]));
  }
  // Rows keyed by their primitive coefficient vector with positive leading
  // coefficient; each keeps the tightest bounds.
  std::map<Expr, std::pair<std::optional<Int>, std::optional<Int>>> rows;
  for (const auto& c : red.inequalities) {
    if (c.coef.empty()) {
      if (c.constant > 0) return std::nullopt;
      continue;
    }
    Int g = 0;
    for (const auto& [v, a] : c.coef) g = gcd(g, a);
    Expr e;
    for (const auto& [v, a] : c.coef) e[v] = a / g;
    // e.x <= floor(-constant / g)
    Int rhs = floor_div(-c.constant, g);
    bool flip = e.begin()->second < 0;
    if (flip) {
      for (auto& [v, a] : e) a = -a;
    }
    auto& slot = rows[e];
    if (!flip) {
      if (!slot.second || rhs < *slot.second) slot.second = rhs;
    } else {
      Int lo = -rhs;
      if (!slot.first || lo > *slot.first) slot.first = lo;
    }
  }
  for (const auto& [e, bounds] : rows) {
    if (e.size() == 1 && e.begin()->second == 1) {
      std::size_t v = e.begin()->first;
      if (bounds.first) sx.set_lower(v, Rational(*bounds.first));
      if (bounds.second) sx.set_upper(v, Rational(*bounds.second));
      continue;
    }
    std::map<std::size_t, Rational> coef;
    for (const auto& [v, a] : e) coef.emplace(v, Rational(a));
    std::optional<Rational> lo, hi;
    if (bounds.first) lo = Rational(*bounds.first);
    if (bounds.second) hi = Rational(*bounds.second);
    sx.add_row(coef, lo, hi);
  }
  return sx;
}

// Depth-first, lowest fractional variable first, floor branch first. The
// current node is updated in place; a pending ceiling branch is stored as a
// chain of bound steps and replayed on a copy of the root.
struct BoundStep {
  std::size_t var;
  bool upper;
  Rational bound;
  std::size_t prev;  // kNoStep at the root
};
constexpr std::size_t kNoStep = static_cast<std::size_t>(-1);

bool branch_and_bound(const Simplex& root, std::size_t nvars, SearchBudget& budget, std::vector<Int>& out) {
  std::vector<BoundStep> steps;
  std::vector<std::size_t> pending;
  Simplex sx = root;
  std::size_t path = kNoStep;
  for (;;) {
    if (++budget.branch_nodes > budget.max_branch_nodes)
      throw ResourceLimit("integer search exceeded " + std::to_string(budget.max_branch_nodes) + " branch nodes");
    ++budget.simplex_runs;
    std::optional<std::size_t> fractional;
    if (sx.check()) {
      for (std::size_t v = 0; v < nvars && !fractional; ++v)
        if (!is_integral(sx.value(v))) fractional = v;
      if (!fractional) {
        out.clear();
        for (std::size_t v = 0; v < nvars; ++v) out.push_back(sx.value(v).get_num());
        return true;
      }
      const std::size_t v = *fractional;
      const Rational x = sx.value(v);
      steps.push_back({v, false, Rational(ceil_of(x)), path});
      pending.push_back(steps.size() - 1);
      steps.push_back({v, true, Rational(floor_of(x)), path});
      path = steps.size() - 1;
      sx.set_upper(v, steps.back().bound);
      continue;
    }
    if (pending.empty()) return false;
    path = pending.back();
    pending.pop_back();
    sx = root;
    for (std::size_t i = path; i != kNoStep; i = steps[i].prev) {
      if (steps[i].upper) sx.set_upper(steps[i].var, steps[i].bound);
      else sx.set_lower(steps[i].var, steps[i].bound);
    }
  }
}

}  // namespace

Int small_model_bound(std::size_t n, std::size_t m, const Int& a) {
  Int base = Int(static_cast<unsigned long>(std::max<std::size_t>(m, 1))) * a;
  Int power;
  mpz_pow_ui(power.get_mpz_t(), base.get_mpz_t(), 2 * std::max<std::size_t>(m, 1) + 1);
  return Int(static_cast<unsigned long>(2 * n + m + 1)) * power;
}

bool relaxation_feasible(const IntegerProblem& problem) {
  Reduced red = reduce(problem, problem_bound(problem));
  if (red.infeasible) return false;
  auto sx = build_simplex(red);
  return sx && sx->check();
}

// Searches boxes 8, 8^2, 8^4, ... up to the small-model bound. Inner boxes
// only restrict the search, so any solution found is genuine, and the last
// box is complete.
std::optional<std::vector<Int>> solve_integer(const IntegerProblem& problem, SearchBudget& budget) {
  const Int full = problem_bound(problem);
  if (!relaxation_feasible(problem)) return std::nullopt;
  for (Int box = std::min(Int(8), full);; box = std::min(Int(box * box), full)) {
    Reduced red = reduce(problem, box);
    if (red.infeasible) return std::nullopt;
    auto sx = build_simplex(red);
    if (!sx) return std::nullopt;
    std::vector<Int> reduced_values;
    if (branch_and_bound(*sx, red.vars.size(), budget, reduced_values)) {
      std::vector<Int> values(problem.num_vars);
      for (std::size_t v = 0; v < problem.num_vars; ++v) {
        const auto& [e, k] = red.originals[v];
        Int x = k;
        for (const auto& [d, c] : e) x += c * reduced_values[d];
        values[v] = x;
      }
      return values;
    }
    if (box == full) return std::nullopt;
  }
}

}  // namespace sfacheck::detail
