#include "sfacheck/presburger.hpp"

#include <functional>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "linear_solver.hpp"
#include "sfacheck/errors.hpp"

namespace sfacheck {

Term Term::var(std::string name) { return Term(Node{Kind::var, std::move(name), Int(0), {}}); }
Term Term::constant(Int value) { return Term(Node{Kind::constant, {}, std::move(value), {}}); }
Term Term::sum(std::vector<Term> terms) {
  if (terms.empty()) return constant(0);
  if (terms.size() == 1) return terms.front();
  return Term(Node{Kind::sum, {}, Int(0), std::move(terms)});
}
Term Term::scale(Int factor, Term t) { return Term(Node{Kind::scale, {}, std::move(factor), {std::move(t)}}); }

Term operator+(const Term& a, const Term& b) { return Term::sum({a, b}); }
Term operator-(const Term& a, const Term& b) { return Term::sum({a, Term::scale(Int(-1), b)}); }
Term operator*(const Int& k, const Term& t) { return Term::scale(k, t); }

Formula Formula::truth() { return Formula(Node{Kind::truth, {}, Int(0), {}}); }
Formula Formula::falsity() { return Formula(Node{Kind::falsity, {}, Int(0), {}}); }
Formula Formula::eq(Term lhs, Term rhs) { return Formula(Node{Kind::eq, {std::move(lhs), std::move(rhs)}, Int(0), {}}); }
Formula Formula::le(Term lhs, Term rhs) { return Formula(Node{Kind::le, {std::move(lhs), std::move(rhs)}, Int(0), {}}); }
Formula Formula::dvd(Int modulus, Term t) { return Formula(Node{Kind::dvd, {std::move(t)}, std::move(modulus), {}}); }
Formula Formula::conjunction(std::vector<Formula> parts) {
  if (parts.empty()) return truth();
  if (parts.size() == 1) return parts.front();
  return Formula(Node{Kind::conjunction, {}, Int(0), std::move(parts)});
}
Formula Formula::disjunction(std::vector<Formula> parts) {
  if (parts.empty()) return falsity();
  if (parts.size() == 1) return parts.front();
  return Formula(Node{Kind::disjunction, {}, Int(0), std::move(parts)});
}
Formula Formula::negation(Formula f) { return Formula(Node{Kind::negation, {}, Int(0), {std::move(f)}}); }

Formula operator&&(const Formula& a, const Formula& b) { return Formula::conjunction({a, b}); }
Formula operator||(const Formula& a, const Formula& b) { return Formula::disjunction({a, b}); }
Formula operator!(const Formula& f) { return Formula::negation(f); }

// ---------------------------------------------------------------------------
// Evaluation

Int pa_eval(const Term& t, const IntAssignment& a) {
  switch (t.kind()) {
    case Term::Kind::var: {
      auto it = a.find(t.name());
      if (it == a.end()) throw MissingVariable("no value for variable '" + t.name() + "'");
      return it->second;
    }
    case Term::Kind::constant:
      return t.value();
    case Term::Kind::sum: {
      Int s = 0;
      for (const auto& c : t.children()) s += pa_eval(c, a);
      return s;
    }
    case Term::Kind::scale:
      return t.value() * pa_eval(t.children()[0], a);
  }
  return Int(0);
}

bool pa_eval(const Formula& f, const IntAssignment& a) {
  switch (f.kind()) {
    case Formula::Kind::truth:
      return true;
    case Formula::Kind::falsity:
      return false;
    case Formula::Kind::eq:
      return pa_eval(f.lhs(), a) == pa_eval(f.rhs(), a);
    case Formula::Kind::le:
      return pa_eval(f.lhs(), a) <= pa_eval(f.rhs(), a);
    case Formula::Kind::dvd: {
      Int v = pa_eval(f.term(), a);
      if (f.modulus() == 0) return v == 0;
      return euclid_mod(v, f.modulus()) == 0;
    }
    case Formula::Kind::conjunction: {
      // Evaluate every child so that missing variables are always reported.
      bool all = true;
      for (const auto& c : f.children()) all = pa_eval(c, a) && all;
      return all;
    }
    case Formula::Kind::disjunction: {
      bool any = false;
      for (const auto& c : f.children()) any = pa_eval(c, a) || any;
      return any;
    }
    case Formula::Kind::negation:
      return !pa_eval(f.children()[0], a);
  }
  return false;
}

bool pa_eval(const PresburgerFormula& f, const IntAssignment& a) {
  for (const auto& v : f.exists)
    if (!a.count(v)) throw MissingVariable("no value for variable '" + v + "'");
  return pa_eval(f.body, a);
}

// ---------------------------------------------------------------------------
// Size, variables, printing

namespace {

std::size_t term_nodes(const Term& t) {
  std::size_t n = 1;
  for (const auto& c : t.children()) n += term_nodes(c);
  return n;
}

void collect_vars(const Term& t, std::vector<std::string>& out, std::set<std::string>& seen) {
  if (t.kind() == Term::Kind::var) {
    if (seen.insert(t.name()).second) out.push_back(t.name());
    return;
  }
  for (const auto& c : t.children()) collect_vars(c, out, seen);
}

void collect_vars(const Formula& f, std::vector<std::string>& out, std::set<std::string>& seen) {
  switch (f.kind()) {
    case Formula::Kind::eq:
    case Formula::Kind::le:
      collect_vars(f.lhs(), out, seen);
      collect_vars(f.rhs(), out, seen);
      break;
    case Formula::Kind::dvd:
      collect_vars(f.term(), out, seen);
      break;
    default:
      for (const auto& c : f.children()) collect_vars(c, out, seen);
  }
}

}  // namespace

std::size_t node_count(const Formula& f) {
  std::size_t n = 1;
  switch (f.kind()) {
    case Formula::Kind::eq:
    case Formula::Kind::le:
      return n + term_nodes(f.lhs()) + term_nodes(f.rhs());
    case Formula::Kind::dvd:
      return n + term_nodes(f.term());
    default:
      for (const auto& c : f.children()) n += node_count(c);
      return n;
  }
}

std::size_t node_count(const PresburgerFormula& f) { return f.exists.size() + node_count(f.body); }

std::vector<std::string> free_variables(const PresburgerFormula& f) {
  std::vector<std::string> all;
  std::set<std::string> seen;
  collect_vars(f.body, all, seen);
  std::set<std::string> bound(f.exists.begin(), f.exists.end());
  std::vector<std::string> out;
  for (auto& v : all)
    if (!bound.count(v)) out.push_back(v);
  return out;
}

std::string to_string(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::var:
      return t.name();
    case Term::Kind::constant:
      return t.value().get_str();
    case Term::Kind::sum: {
      std::string s = "(";
      for (std::size_t i = 0; i < t.children().size(); ++i) {
        if (i) s += " + ";
        s += to_string(t.children()[i]);
      }
      return s + ")";
    }
    case Term::Kind::scale:
      return t.value().get_str() + "*" + to_string(t.children()[0]);
  }
  return {};
}

std::string to_string(const Formula& f) {
  auto join = [&](const char* op) {
    std::string s = "(";
    for (std::size_t i = 0; i < f.children().size(); ++i) {
      if (i) s += op;
      s += to_string(f.children()[i]);
    }
    return s + ")";
  };
  switch (f.kind()) {
    case Formula::Kind::truth:
      return "true";
    case Formula::Kind::falsity:
      return "false";
    case Formula::Kind::eq:
      return to_string(f.lhs()) + " = " + to_string(f.rhs());
    case Formula::Kind::le:
      return to_string(f.lhs()) + " <= " + to_string(f.rhs());
    case Formula::Kind::dvd:
      return f.modulus().get_str() + " dvd " + to_string(f.term());
    case Formula::Kind::conjunction:
      return join(" & ");
    case Formula::Kind::disjunction:
      return join(" | ");
    case Formula::Kind::negation:
      return "!" + to_string(f.children()[0]);
  }
  return {};
}

std::string to_string(const PresburgerFormula& f) {
  if (f.exists.empty()) return to_string(f.body);
  std::string s = "exists";
  for (const auto& v : f.exists) s += " " + v;
  return s + ". " + to_string(f.body);
}

// ---------------------------------------------------------------------------
// Solving

namespace {

using detail::LinearConstraint;

struct Goal {
  Formula formula;
  bool positive;
};

class PaSearch {
 public:
  PaSearch(const PresburgerFormula& f, const PaOptions& options, PaStats& stats)
      : options_(options), stats_(stats) {
    for (const auto& v : f.exists) intern(v);
    std::vector<std::string> all;
    std::set<std::string> seen;
    collect_vars(f.body, all, seen);
    for (const auto& v : all) intern(v);
    named_ = names_.size();
  }

  std::optional<std::vector<Int>> run(const Formula& body) {
    std::vector<LinearConstraint> cons;
    return search({Goal{body, true}}, {}, cons, named_);
  }

  const std::vector<std::string>& names() const { return names_; }
  std::size_t named() const { return named_; }

 private:
  std::size_t intern(const std::string& v) {
    auto [it, inserted] = index_.emplace(v, names_.size());
    if (inserted) names_.push_back(v);
    return it->second;
  }

  void linearize(const Term& t, const Int& factor, LinearConstraint& out) {
    switch (t.kind()) {
      case Term::Kind::var: {
        Int& slot = out.coef[index_.at(t.name())];
        slot += factor;
        if (slot == 0) out.coef.erase(index_.at(t.name()));
        break;
      }
      case Term::Kind::constant:
        out.constant += factor * t.value();
        break;
      case Term::Kind::sum:
        for (const auto& c : t.children()) linearize(c, factor, out);
        break;
      case Term::Kind::scale:
        if (t.value() != 0) linearize(t.children()[0], factor * t.value(), out);
        break;
    }
  }

  // lhs - rhs + shift
  LinearConstraint difference(const Term& lhs, const Term& rhs, long shift, bool equality) {
    LinearConstraint c;
    c.equality = equality;
    c.constant = shift;
    linearize(lhs, Int(1), c);
    linearize(rhs, Int(-1), c);
    return c;
  }

  void tick() {
    if (++stats_.cases > options_.max_cases)
      throw ResourceLimit("case split budget of " + std::to_string(options_.max_cases) + " exhausted");
  }

  // Expands `goals` into constraints, collecting disjunctive goals in order
  // of appearance. Returns false on a trivially false branch.
  bool expand(std::vector<Goal> goals, std::vector<std::vector<Goal>>& ors, std::vector<LinearConstraint>& cons,
              std::size_t& fresh) {
    std::vector<Goal> stack(goals.rbegin(), goals.rend());
    while (!stack.empty()) {
      Goal g = std::move(stack.back());
      stack.pop_back();
      const Formula& f = g.formula;
      switch (f.kind()) {
        case Formula::Kind::truth:
          if (!g.positive) return false;
          break;
        case Formula::Kind::falsity:
          if (g.positive) return false;
          break;
        case Formula::Kind::negation:
          stack.push_back({f.children()[0], !g.positive});
          break;
        case Formula::Kind::conjunction:
        case Formula::Kind::disjunction: {
          bool all = (f.kind() == Formula::Kind::conjunction) == g.positive;
          if (all) {
            for (auto it = f.children().rbegin(); it != f.children().rend(); ++it) stack.push_back({*it, g.positive});
          } else {
            std::vector<Goal> options;
            for (const auto& c : f.children()) options.push_back({c, g.positive});
            ors.push_back(std::move(options));
          }
          break;
        }
        case Formula::Kind::eq:
          if (g.positive) {
            cons.push_back(difference(f.lhs(), f.rhs(), 0, true));
          } else {
            Term one = Term::constant(1);
            ors.push_back({Goal{Formula::le(f.lhs() + one, f.rhs()), true},
                           Goal{Formula::le(f.rhs() + one, f.lhs()), true}});
          }
          break;
        case Formula::Kind::le:
          if (g.positive) {
            cons.push_back(difference(f.lhs(), f.rhs(), 0, false));
          } else {
            // lhs > rhs  <=>  rhs - lhs + 1 <= 0
            cons.push_back(difference(f.rhs(), f.lhs(), 1, false));
          }
          break;
        case Formula::Kind::dvd: {
          Int k = abs(f.modulus());
          LinearConstraint c;
          c.equality = true;
          linearize(f.term(), Int(1), c);
          if (k == 0) {
            if (!g.positive) {
              Term zero = Term::constant(0);
              ors.push_back({Goal{Formula::le(f.term(), zero - Term::constant(1)), true},
                             Goal{Formula::le(Term::constant(1), f.term()), true}});
              break;
            }
            cons.push_back(std::move(c));
            break;
          }
          if (!g.positive && k == 1) return false;
          std::size_t q = fresh++;
          c.coef[q] = -k;
          if (!g.positive) {
            std::size_t r = fresh++;
            c.coef[r] = -1;
            cons.push_back({{{r, Int(-1)}}, Int(1), false});  // 1 <= r
            cons.push_back({{{r, Int(1)}}, Int(1) - k, false});  // r <= k-1
          }
          cons.push_back(std::move(c));
          break;
        }
      }
    }
    return true;
  }

  std::optional<std::vector<Int>> search(std::vector<Goal> goals, std::vector<std::vector<Goal>> ors,
                                         std::vector<LinearConstraint> cons, std::size_t fresh) {
    tick();
    if (!expand(std::move(goals), ors, cons, fresh)) return std::nullopt;
    detail::IntegerProblem problem{fresh, cons};
    if (ors.empty()) {
      ++stats_.leaves;
      detail::SearchBudget budget;
      budget.max_branch_nodes = options_.max_branch_nodes;
      auto r = detail::solve_integer(problem, budget);
      stats_.branch_nodes += budget.branch_nodes;
      return r;
    }
    if (!detail::relaxation_feasible(problem)) {
      ++stats_.pruned;
      return std::nullopt;
    }
    std::vector<Goal> options = std::move(ors.front());
    ors.erase(ors.begin());
    for (auto& option : options) {
      auto r = search({option}, ors, cons, fresh);
      if (r) return r;
    }
    return std::nullopt;
  }

  const PaOptions& options_;
  PaStats& stats_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> names_;
  std::size_t named_ = 0;
};

}  // namespace

std::optional<IntAssignment> pa_solve(const PresburgerFormula& f, const PaOptions& options, PaStats* stats) {
  PaStats local;
  PaStats& s = stats ? *stats : local;
  PaSearch search(f, options, s);
  auto values = search.run(f.body);
  if (!values) return std::nullopt;
  IntAssignment model;
  for (std::size_t i = 0; i < search.named(); ++i) model[search.names()[i]] = (*values)[i];
  if (!pa_eval(f, model)) throw std::logic_error("arithmetic model failed validation");
  return model;
}

}  // namespace sfacheck
