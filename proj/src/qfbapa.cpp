#include "sfacheck/qfbapa.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>

#include "sfacheck/errors.hpp"

namespace sfacheck {

SetExpr SetExpr::var(std::string name) { return SetExpr(Node{Kind::var, std::move(name), {}}); }
SetExpr SetExpr::empty() { return SetExpr(Node{Kind::empty, {}, {}}); }
SetExpr SetExpr::universe() { return SetExpr(Node{Kind::universe, {}, {}}); }
SetExpr SetExpr::set_union(SetExpr a, SetExpr b) { return SetExpr(Node{Kind::set_union, {}, {std::move(a), std::move(b)}}); }
SetExpr SetExpr::intersection(SetExpr a, SetExpr b) {
  return SetExpr(Node{Kind::intersection, {}, {std::move(a), std::move(b)}});
}
SetExpr SetExpr::complement(SetExpr a) { return SetExpr(Node{Kind::complement, {}, {std::move(a)}}); }

namespace {

using VarIndex = std::unordered_map<std::string, std::size_t>;

VarIndex index_of_vars(const std::vector<std::string>& vars) {
  VarIndex idx;
  for (std::size_t i = 0; i < vars.size(); ++i) idx.emplace(vars[i], i);
  return idx;
}

bool eval_set(const SetExpr& s, const VarIndex& idx, const std::vector<bool>& bits) {
  switch (s.kind()) {
    case SetExpr::Kind::var: {
      auto it = idx.find(s.name());
      if (it == idx.end()) throw SemanticError("unknown set variable '" + s.name() + "'");
      return bits[it->second];
    }
    case SetExpr::Kind::empty:
      return false;
    case SetExpr::Kind::universe:
      return true;
    case SetExpr::Kind::set_union:
      return eval_set(s.children()[0], idx, bits) || eval_set(s.children()[1], idx, bits);
    case SetExpr::Kind::intersection:
      return eval_set(s.children()[0], idx, bits) && eval_set(s.children()[1], idx, bits);
    case SetExpr::Kind::complement:
      return !eval_set(s.children()[0], idx, bits);
  }
  return false;
}

}  // namespace

bool SetExpr::evaluate(const std::vector<std::string>& vars, const std::vector<bool>& bits) const {
  switch (kind()) {
    case Kind::var: {
      for (std::size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == name()) return bits[i];
      throw SemanticError("unknown set variable '" + name() + "'");
    }
    case Kind::empty:
      return false;
    case Kind::universe:
      return true;
    case Kind::set_union:
      return children()[0].evaluate(vars, bits) || children()[1].evaluate(vars, bits);
    case Kind::intersection:
      return children()[0].evaluate(vars, bits) && children()[1].evaluate(vars, bits);
    case Kind::complement:
      return !children()[0].evaluate(vars, bits);
  }
  return false;
}

BapaTerm BapaTerm::var(std::string name) { return BapaTerm(Node{Kind::var, std::move(name), Int(0), {}, {}}); }
BapaTerm BapaTerm::constant(Int value) { return BapaTerm(Node{Kind::constant, {}, std::move(value), {}, {}}); }
BapaTerm BapaTerm::sum(BapaTerm a, BapaTerm b) {
  return BapaTerm(Node{Kind::sum, {}, Int(0), {std::move(a), std::move(b)}, {}});
}
BapaTerm BapaTerm::scale(Int factor, BapaTerm t) {
  return BapaTerm(Node{Kind::scale, {}, std::move(factor), {std::move(t)}, {}});
}
BapaTerm BapaTerm::card(SetExpr s) { return BapaTerm(Node{Kind::card, {}, Int(0), {}, std::move(s)}); }

BapaFormula BapaFormula::truth() { return BapaFormula(Node{Kind::truth, {}, {}, Int(0), {}}); }
BapaFormula BapaFormula::falsity() { return BapaFormula(Node{Kind::falsity, {}, {}, Int(0), {}}); }
BapaFormula BapaFormula::set_eq(SetExpr a, SetExpr b) {
  return BapaFormula(Node{Kind::set_eq, {std::move(a), std::move(b)}, {}, Int(0), {}});
}
BapaFormula BapaFormula::subset(SetExpr a, SetExpr b) {
  return BapaFormula(Node{Kind::subset, {std::move(a), std::move(b)}, {}, Int(0), {}});
}
BapaFormula BapaFormula::eq(BapaTerm a, BapaTerm b) {
  return BapaFormula(Node{Kind::eq, {}, {std::move(a), std::move(b)}, Int(0), {}});
}
BapaFormula BapaFormula::le(BapaTerm a, BapaTerm b) {
  return BapaFormula(Node{Kind::le, {}, {std::move(a), std::move(b)}, Int(0), {}});
}
BapaFormula BapaFormula::dvd(Int modulus, BapaTerm t) {
  return BapaFormula(Node{Kind::dvd, {}, {std::move(t)}, std::move(modulus), {}});
}
BapaFormula BapaFormula::conjunction(BapaFormula a, BapaFormula b) {
  return BapaFormula(Node{Kind::conjunction, {}, {}, Int(0), {std::move(a), std::move(b)}});
}
BapaFormula BapaFormula::disjunction(BapaFormula a, BapaFormula b) {
  return BapaFormula(Node{Kind::disjunction, {}, {}, Int(0), {std::move(a), std::move(b)}});
}
BapaFormula BapaFormula::negation(BapaFormula f) {
  return BapaFormula(Node{Kind::negation, {}, {}, Int(0), {std::move(f)}});
}

// ---------------------------------------------------------------------------
// Traversal

namespace {

void visit_sets(const SetExpr& s, const std::function<void(const SetExpr&)>& fn) {
  fn(s);
  for (const auto& c : s.children()) visit_sets(c, fn);
}

void visit_terms(const BapaTerm& t, const std::function<void(const BapaTerm&)>& fn) {
  fn(t);
  for (const auto& c : t.children()) visit_terms(c, fn);
}

// Calls `on_set` for every top-level set expression (atoms and |B|) and
// `on_term` for every term node, left to right.
void visit(const BapaFormula& f, const std::function<void(const SetExpr&)>& on_set,
           const std::function<void(const BapaTerm&)>& on_term) {
  auto term = [&](const BapaTerm& t) {
    visit_terms(t, [&](const BapaTerm& n) {
      on_term(n);
      if (n.kind() == BapaTerm::Kind::card) on_set(n.set());
    });
  };
  switch (f.kind()) {
    case BapaFormula::Kind::truth:
    case BapaFormula::Kind::falsity:
      break;
    case BapaFormula::Kind::set_eq:
    case BapaFormula::Kind::subset:
      on_set(f.set_lhs());
      on_set(f.set_rhs());
      break;
    case BapaFormula::Kind::eq:
    case BapaFormula::Kind::le:
      term(f.lhs());
      term(f.rhs());
      break;
    case BapaFormula::Kind::dvd:
      term(f.term());
      break;
    default:
      for (const auto& c : f.children()) visit(c, on_set, on_term);
  }
}

struct OrderedNames {
  std::vector<std::string> names;
  std::set<std::string> seen;
  void add(const std::string& v) {
    if (seen.insert(v).second) names.push_back(v);
  }
};

}  // namespace

std::vector<std::string> set_variables(const BapaFormula& f) {
  OrderedNames out;
  visit(
      f,
      [&](const SetExpr& s) {
        visit_sets(s, [&](const SetExpr& n) {
          if (n.kind() == SetExpr::Kind::var) out.add(n.name());
        });
      },
      [](const BapaTerm&) {});
  return out.names;
}

std::vector<std::string> int_variables(const BapaFormula& f) {
  OrderedNames out;
  visit(
      f, [](const SetExpr&) {},
      [&](const BapaTerm& t) {
        if (t.kind() == BapaTerm::Kind::var) out.add(t.name());
      });
  return out.names;
}

// ---------------------------------------------------------------------------
// Printing

std::string to_string(const SetExpr& s) {
  switch (s.kind()) {
    case SetExpr::Kind::var:
      return s.name();
    case SetExpr::Kind::empty:
      return "empty";
    case SetExpr::Kind::universe:
      return "U";
    case SetExpr::Kind::set_union:
      return "(" + to_string(s.children()[0]) + " + " + to_string(s.children()[1]) + ")";
    case SetExpr::Kind::intersection:
      return "(" + to_string(s.children()[0]) + " & " + to_string(s.children()[1]) + ")";
    case SetExpr::Kind::complement:
      return "~" + to_string(s.children()[0]);
  }
  return {};
}

std::string to_string(const BapaTerm& t) {
  switch (t.kind()) {
    case BapaTerm::Kind::var:
      return t.name();
    case BapaTerm::Kind::constant:
      return t.value().get_str();
    case BapaTerm::Kind::sum:
      return "(" + to_string(t.children()[0]) + " + " + to_string(t.children()[1]) + ")";
    case BapaTerm::Kind::scale:
      return t.value().get_str() + "*" + to_string(t.children()[0]);
    case BapaTerm::Kind::card: {
      std::string inner = to_string(t.set());
      if (inner.size() > 1 && inner.front() == '(' && inner.back() == ')') inner = inner.substr(1, inner.size() - 2);
      return "|" + inner + "|";
    }
  }
  return {};
}

std::string to_string(const BapaFormula& f) {
  switch (f.kind()) {
    case BapaFormula::Kind::truth:
      return "true";
    case BapaFormula::Kind::falsity:
      return "false";
    case BapaFormula::Kind::set_eq:
      return to_string(f.set_lhs()) + " = " + to_string(f.set_rhs());
    case BapaFormula::Kind::subset:
      return to_string(f.set_lhs()) + " sub " + to_string(f.set_rhs());
    case BapaFormula::Kind::eq:
      return to_string(f.lhs()) + " = " + to_string(f.rhs());
    case BapaFormula::Kind::le:
      return to_string(f.lhs()) + " <= " + to_string(f.rhs());
    case BapaFormula::Kind::dvd:
      return f.modulus().get_str() + " dvd " + to_string(f.term());
    case BapaFormula::Kind::conjunction:
      return "(" + to_string(f.children()[0]) + " & " + to_string(f.children()[1]) + ")";
    case BapaFormula::Kind::disjunction:
      return "(" + to_string(f.children()[0]) + " or " + to_string(f.children()[1]) + ")";
    case BapaFormula::Kind::negation:
      return "!(" + to_string(f.children()[0]) + ")";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Rewriting and expansion

BapaFormula rewrite_atoms(const BapaFormula& f) {
  auto empty_diff = [](const SetExpr& a, const SetExpr& b) {
    return BapaFormula::eq(BapaTerm::card(SetExpr::intersection(a, SetExpr::complement(b))), BapaTerm::constant(0));
  };
  switch (f.kind()) {
    case BapaFormula::Kind::set_eq:
      return BapaFormula::conjunction(empty_diff(f.set_lhs(), f.set_rhs()), empty_diff(f.set_rhs(), f.set_lhs()));
    case BapaFormula::Kind::subset:
      return empty_diff(f.set_lhs(), f.set_rhs());
    case BapaFormula::Kind::conjunction:
      return BapaFormula::conjunction(rewrite_atoms(f.children()[0]), rewrite_atoms(f.children()[1]));
    case BapaFormula::Kind::disjunction:
      return BapaFormula::disjunction(rewrite_atoms(f.children()[0]), rewrite_atoms(f.children()[1]));
    case BapaFormula::Kind::negation:
      return BapaFormula::negation(rewrite_atoms(f.children()[0]));
    default:
      return f;
  }
}

std::string region_var(const Minterm& beta) { return "l." + beta.str(); }

namespace {

struct CardIndex {
  std::vector<SetExpr> exprs;
  std::map<std::string, std::size_t> by_text;

  std::size_t add(const SetExpr& s) {
    auto [it, inserted] = by_text.emplace(to_string(s), exprs.size());
    if (inserted) exprs.push_back(s);
    return it->second;
  }
};

CardIndex collect_cards(const BapaFormula& rewritten) {
  CardIndex idx;
  visit(
      rewritten, [](const SetExpr&) {},
      [&](const BapaTerm& t) {
        if (t.kind() == BapaTerm::Kind::card) idx.add(t.set());
      });
  return idx;
}

std::string card_var(std::size_t i) { return "card." + std::to_string(i); }

Term lower(const BapaTerm& t, CardIndex& idx) {
  switch (t.kind()) {
    case BapaTerm::Kind::var:
      return Term::var(t.name());
    case BapaTerm::Kind::constant:
      return Term::constant(t.value());
    case BapaTerm::Kind::sum:
      return lower(t.children()[0], idx) + lower(t.children()[1], idx);
    case BapaTerm::Kind::scale:
      return Term::scale(t.value(), lower(t.children()[0], idx));
    case BapaTerm::Kind::card:
      return Term::var(card_var(idx.add(t.set())));
  }
  return Term::constant(0);
}

Formula lower(const BapaFormula& f, CardIndex& idx) {
  switch (f.kind()) {
    case BapaFormula::Kind::truth:
      return Formula::truth();
    case BapaFormula::Kind::falsity:
      return Formula::falsity();
    case BapaFormula::Kind::set_eq:
    case BapaFormula::Kind::subset:
      return lower(rewrite_atoms(f), idx);
    case BapaFormula::Kind::eq:
      return Formula::eq(lower(f.lhs(), idx), lower(f.rhs(), idx));
    case BapaFormula::Kind::le:
      return Formula::le(lower(f.lhs(), idx), lower(f.rhs(), idx));
    case BapaFormula::Kind::dvd:
      return Formula::dvd(f.modulus(), lower(f.term(), idx));
    case BapaFormula::Kind::conjunction:
      return lower(f.children()[0], idx) && lower(f.children()[1], idx);
    case BapaFormula::Kind::disjunction:
      return lower(f.children()[0], idx) || lower(f.children()[1], idx);
    case BapaFormula::Kind::negation:
      return !lower(f.children()[0], idx);
  }
  return Formula::falsity();
}

void check_vars(const BapaFormula& f, const VarIndex& idx) {
  for (const auto& v : set_variables(f))
    if (!idx.count(v)) throw SemanticError("set variable '" + v + "' is not declared");
}

}  // namespace

VennSystem venn_expand(const BapaFormula& f, const std::vector<std::string>& set_vars,
                       const std::vector<Minterm>& regions) {
  const VarIndex var_index = index_of_vars(set_vars);
  check_vars(f, var_index);
  BapaFormula g = rewrite_atoms(f);
  CardIndex idx = collect_cards(g);
  VennSystem out;
  std::vector<Formula> parts{lower(g, idx)};
  out.card_exprs = idx.exprs;
  for (const auto& beta : regions) {
    if (beta.size() != set_vars.size())
      throw LengthMismatch("region " + beta.str() + " has the wrong number of bits");
    out.region_vars.push_back(region_var(beta));
    parts.push_back(Formula::le(Term::constant(0), Term::var(out.region_vars.back())));
  }
  for (std::size_t i = 0; i < idx.exprs.size(); ++i) {
    out.card_vars.push_back(card_var(i));
    std::vector<Term> members;
    for (std::size_t r = 0; r < regions.size(); ++r)
      if (eval_set(idx.exprs[i], var_index, regions[r].bits)) members.push_back(Term::var(out.region_vars[r]));
    parts.push_back(Formula::eq(Term::var(out.card_vars[i]), Term::sum(std::move(members))));
  }
  out.formula.exists = out.region_vars;
  out.formula.exists.insert(out.formula.exists.end(), out.card_vars.begin(), out.card_vars.end());
  out.formula.body = Formula::conjunction(std::move(parts));
  return out;
}

std::size_t cardinality_count(const BapaFormula& f) { return collect_cards(rewrite_atoms(f)).exprs.size(); }

std::uint64_t sparsity_bound(std::uint64_t p, std::uint64_t a) {
  if (p == 0) return 0;
  a = std::max<std::uint64_t>(a, 1);
  long double v = 2.0L * p * std::log2(4.0L * p * a);
  return static_cast<std::uint64_t>(std::floor(v + 1e-12L));
}

// ---------------------------------------------------------------------------
// Solving, certificates, evaluation

namespace {

std::vector<Minterm> all_regions(std::size_t e) {
  std::vector<Minterm> rs;
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << e); ++i) rs.push_back(Minterm::from_index(i, e));
  return rs;
}

SetModel build_model(const std::vector<std::string>& set_vars, const std::vector<Minterm>& regions,
                     const IntAssignment& values, const BapaFormula& f, const BapaOptions& options) {
  SetModel m;
  m.set_vars = set_vars;
  m.regions.assign(std::size_t{1} << set_vars.size(), Int(0));
  for (const auto& beta : regions) {
    const Int& l = values.at(region_var(beta));
    m.regions[beta.index()] = l;
    m.universe += l;
  }
  for (const auto& v : int_variables(f)) m.ints[v] = values.at(v);
  if (m.universe <= options.max_concrete_universe) {
    std::map<std::string, std::vector<std::uint64_t>> sets;
    for (const auto& v : set_vars) sets[v];
    std::uint64_t next = 1;
    for (std::uint64_t i = 0; i < m.regions.size(); ++i) {
      Minterm beta = Minterm::from_index(i, set_vars.size());
      std::uint64_t count = m.regions[i].get_ui();
      for (std::uint64_t n = 0; n < count; ++n, ++next)
        for (std::size_t s = 0; s < set_vars.size(); ++s)
          if (beta.bits[s]) sets[set_vars[s]].push_back(next);
    }
    m.sets = std::move(sets);
  }
  return m;
}

}  // namespace

std::optional<SetModel> qfbapa_solve(const BapaFormula& f, const std::vector<std::string>& set_vars,
                                     const BapaOptions& options) {
  if (set_vars.size() > options.max_set_vars)
    throw TooManySetVariables(std::to_string(set_vars.size()) + " set variables exceed the limit of " +
                              std::to_string(options.max_set_vars));
  auto regions = all_regions(set_vars.size());
  VennSystem sys = venn_expand(f, set_vars, regions);
  auto values = pa_solve(sys.formula, options.arithmetic);
  if (!values) return std::nullopt;
  return build_model(set_vars, regions, *values, f, options);
}

std::optional<SetModel> qfbapa_solve(const BapaFormula& f, const BapaOptions& options) {
  return qfbapa_solve(f, set_variables(f), options);
}

bool qfbapa_verify(const BapaFormula& f, const std::vector<std::string>& set_vars, const SparseCertificate& c) {
  const std::size_t e = set_vars.size();
  const VarIndex var_index = index_of_vars(set_vars);
  for (const auto& v : set_variables(f))
    if (!var_index.count(v)) return false;
  std::set<std::uint64_t> seen;
  for (auto r : c.regions) {
    if (e < 64 && r >= (std::uint64_t{1} << e)) return false;
    if (!seen.insert(r).second) return false;
  }
  if (c.regions.size() > sparsity_bound(cardinality_count(f), 1)) return false;
  std::vector<Minterm> regions;
  for (auto r : c.regions) regions.push_back(Minterm::from_index(r, e));
  VennSystem sys = venn_expand(f, set_vars, regions);
  try {
    return pa_eval(sys.formula, c.assignment);
  } catch (const MissingVariable&) {
    return false;
  }
}

bool qfbapa_verify(const BapaFormula& f, const SparseCertificate& c) {
  return qfbapa_verify(f, set_variables(f), c);
}

std::optional<SparseCertificate> find_sparse_certificate(const BapaFormula& f, const BapaOptions& options) {
  const auto set_vars = set_variables(f);
  auto model = qfbapa_solve(f, set_vars, options);
  if (!model) return std::nullopt;
  const std::size_t e = set_vars.size();
  const std::uint64_t bound = sparsity_bound(cardinality_count(f), 1);

  auto certificate_for = [&](const std::vector<std::uint64_t>& support) -> std::optional<SparseCertificate> {
    std::vector<Minterm> regions;
    for (auto r : support) regions.push_back(Minterm::from_index(r, e));
    VennSystem sys = venn_expand(f, set_vars, regions);
    auto values = pa_solve(sys.formula, options.arithmetic);
    if (!values) return std::nullopt;
    return SparseCertificate{support, *values};
  };

  std::vector<std::uint64_t> support;
  for (std::uint64_t i = 0; i < model->regions.size(); ++i)
    if (model->regions[i] != 0) support.push_back(i);
  if (support.size() <= bound) {
    SparseCertificate c{support, model->ints};
    std::vector<Minterm> regions;
    for (auto r : support) regions.push_back(Minterm::from_index(r, e));
    VennSystem sys = venn_expand(f, set_vars, regions);
    for (auto r : support) c.assignment[region_var(Minterm::from_index(r, e))] = model->regions[r];
    const VarIndex var_index = index_of_vars(set_vars);
    for (std::size_t i = 0; i < sys.card_exprs.size(); ++i) {
      Int total = 0;
      for (auto r : support)
        if (eval_set(sys.card_exprs[i], var_index, Minterm::from_index(r, e).bits)) total += model->regions[r];
      c.assignment[sys.card_vars[i]] = total;
    }
    return c;
  }

  const std::uint64_t total = model->regions.size();
  for (std::uint64_t size = 0; size <= std::min<std::uint64_t>(bound, total); ++size) {
    // lexicographic combinations of `size` region indices
    std::vector<std::uint64_t> pick(size);
    for (std::uint64_t i = 0; i < size; ++i) pick[i] = i;
    for (;;) {
      if (auto c = certificate_for(pick)) return c;
      std::int64_t i = static_cast<std::int64_t>(size) - 1;
      while (i >= 0 && pick[i] == total - size + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (std::uint64_t j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return std::nullopt;
}

namespace {

class Evaluator {
 public:
  Evaluator(const SetModel& m) : m_(m) {
    if (!m.sets) throw MissingConcreteSets("the set model has no concrete sets");
    if (!m.universe.fits_ulong_p() || m.universe > 100000000)
      throw MissingConcreteSets("universe too large to evaluate");
    u_ = m.universe.get_ui();
  }

  std::vector<bool> set(const SetExpr& s) const {
    switch (s.kind()) {
      case SetExpr::Kind::var: {
        auto it = m_.sets->find(s.name());
        if (it == m_.sets->end()) throw MissingConcreteSets("no concrete set for '" + s.name() + "'");
        std::vector<bool> v(u_ + 1, false);
        for (auto i : it->second)
          if (i >= 1 && i <= u_) v[i] = true;
        return v;
      }
      case SetExpr::Kind::empty:
        return std::vector<bool>(u_ + 1, false);
      case SetExpr::Kind::universe: {
        std::vector<bool> v(u_ + 1, true);
        v[0] = false;
        return v;
      }
      case SetExpr::Kind::set_union:
      case SetExpr::Kind::intersection: {
        auto a = set(s.children()[0]);
        auto b = set(s.children()[1]);
        for (std::size_t i = 0; i < a.size(); ++i)
          a[i] = s.kind() == SetExpr::Kind::set_union ? (a[i] || b[i]) : (a[i] && b[i]);
        return a;
      }
      case SetExpr::Kind::complement: {
        auto a = set(s.children()[0]);
        for (std::size_t i = 1; i < a.size(); ++i) a[i] = !a[i];
        return a;
      }
    }
    return {};
  }

  Int term(const BapaTerm& t) const {
    switch (t.kind()) {
      case BapaTerm::Kind::var: {
        auto it = m_.ints.find(t.name());
        if (it == m_.ints.end()) throw MissingVariable("no value for variable '" + t.name() + "'");
        return it->second;
      }
      case BapaTerm::Kind::constant:
        return t.value();
      case BapaTerm::Kind::sum:
        return term(t.children()[0]) + term(t.children()[1]);
      case BapaTerm::Kind::scale:
        return t.value() * term(t.children()[0]);
      case BapaTerm::Kind::card: {
        auto v = set(t.set());
        return Int(static_cast<unsigned long>(std::count(v.begin(), v.end(), true)));
      }
    }
    return Int(0);
  }

  bool formula(const BapaFormula& f) const {
    switch (f.kind()) {
      case BapaFormula::Kind::truth:
        return true;
      case BapaFormula::Kind::falsity:
        return false;
      case BapaFormula::Kind::set_eq:
        return set(f.set_lhs()) == set(f.set_rhs());
      case BapaFormula::Kind::subset: {
        auto a = set(f.set_lhs());
        auto b = set(f.set_rhs());
        for (std::size_t i = 0; i < a.size(); ++i)
          if (a[i] && !b[i]) return false;
        return true;
      }
      case BapaFormula::Kind::eq:
        return term(f.lhs()) == term(f.rhs());
      case BapaFormula::Kind::le:
        return term(f.lhs()) <= term(f.rhs());
      case BapaFormula::Kind::dvd: {
        Int v = term(f.term());
        return f.modulus() == 0 ? v == 0 : euclid_mod(v, f.modulus()) == 0;
      }
      case BapaFormula::Kind::conjunction: {
        bool a = formula(f.children()[0]);
        bool b = formula(f.children()[1]);
        return a && b;
      }
      case BapaFormula::Kind::disjunction: {
        bool a = formula(f.children()[0]);
        bool b = formula(f.children()[1]);
        return a || b;
      }
      case BapaFormula::Kind::negation:
        return !formula(f.children()[0]);
    }
    return false;
  }

 private:
  const SetModel& m_;
  std::uint64_t u_ = 0;
};

}  // namespace

bool eval_bapa(const BapaFormula& f, const SetModel& m) { return Evaluator(m).formula(f); }

}  // namespace sfacheck
