#include "sfacheck/algebra.hpp"

#include <functional>
#include <numeric>
#include <sstream>

#include "sfacheck/errors.hpp"

namespace sfacheck {

using i128 = __int128;

AlgebraId AlgebraId::bitvector(unsigned width) {
  if (width == 0 || width > Bdd::kMaxWidth)
    throw SemanticError("bitvector width must be in 1.." + std::to_string(Bdd::kMaxWidth) +
                        ", got " + std::to_string(width));
  return AlgebraId(Kind::bitvector, width);
}

std::string AlgebraId::name() const {
  return kind_ == Kind::integer ? "lia" : "bv" + std::to_string(width_);
}

struct Predicate::Node {
  Kind kind;
  std::optional<Atom> atom;
  std::string name;
  std::vector<Predicate> children;
  std::optional<Bdd> diagram;
  std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

std::size_t atom_hash(const Atom& a) {
  return std::visit(
      [](const auto& x) -> std::size_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, LinearAtom>) {
          return mix(mix(std::hash<std::int64_t>{}(x.coef), std::hash<std::int64_t>{}(x.offset)),
                     static_cast<std::size_t>(x.cmp));
        } else if constexpr (std::is_same_v<T, CongruenceAtom>) {
          return mix(std::hash<std::int64_t>{}(x.modulus) * 7, std::hash<std::int64_t>{}(x.residue));
        } else {
          return mix(99, x.diagram.hash());
        }
      },
      a);
}

void require_same(const AlgebraId& a, const AlgebraId& b) {
  if (!(a == b)) throw AlgebraMismatch("cannot combine predicates of " + a.name() + " and " + b.name());
}

}  // namespace

Predicate Predicate::make(AlgebraId algebra, Node node) {
  std::size_t h = static_cast<std::size_t>(node.kind) + 17;
  if (node.atom) h = mix(h, atom_hash(*node.atom));
  if (!node.name.empty()) h = mix(h, std::hash<std::string>{}(node.name));
  for (const auto& c : node.children) h = mix(h, c.hash());
  node.hash = h;
  if (algebra.kind() == AlgebraId::Kind::bitvector) {
    unsigned w = algebra.width();
    switch (node.kind) {
      case Kind::top: node.diagram = Bdd::constant(w, true); break;
      case Kind::bottom: node.diagram = Bdd::constant(w, false); break;
      case Kind::atom: node.diagram = std::get<BitSetAtom>(*node.atom).diagram; break;
      case Kind::named: node.diagram = node.children[0].diagram(); break;
      case Kind::negation: node.diagram = ~node.children[0].diagram(); break;
      case Kind::conjunction:
        node.diagram = node.children[0].diagram() & node.children[1].diagram();
        break;
      case Kind::disjunction:
        node.diagram = node.children[0].diagram() | node.children[1].diagram();
        break;
    }
  }
  return Predicate(algebra, std::make_shared<const Node>(std::move(node)));
}

Predicate Predicate::top(const AlgebraId& algebra) { return make(algebra, Node{Kind::top}); }

Predicate Predicate::bottom(const AlgebraId& algebra) { return make(algebra, Node{Kind::bottom}); }

Predicate Predicate::atom(const AlgebraId& algebra, Atom a) {
  bool bv_atom = std::holds_alternative<BitSetAtom>(a);
  if (bv_atom != (algebra.kind() == AlgebraId::Kind::bitvector))
    throw AlgebraMismatch("atom does not belong to algebra " + algebra.name());
  if (bv_atom && std::get<BitSetAtom>(a).diagram.width() != algebra.width())
    throw AlgebraMismatch("diagram width differs from algebra " + algebra.name());
  if (auto* c = std::get_if<CongruenceAtom>(&a); c && c->modulus < 1)
    throw SemanticError("congruence modulus must be positive");
  Node n{Kind::atom};
  n.atom = std::move(a);
  return make(algebra, std::move(n));
}

Predicate Predicate::named(std::string name, const Predicate& body) {
  Node n{Kind::named};
  n.name = std::move(name);
  n.children = {body};
  return make(body.algebra(), std::move(n));
}

Predicate Predicate::negation(const Predicate& p) {
  switch (p.kind()) {
    case Kind::top: return bottom(p.algebra());
    case Kind::bottom: return top(p.algebra());
    case Kind::negation: return p.children()[0];
    default: break;
  }
  Node n{Kind::negation};
  n.children = {p};
  return make(p.algebra(), std::move(n));
}

Predicate Predicate::conjunction(const Predicate& p, const Predicate& q) {
  require_same(p.algebra(), q.algebra());
  if (p.kind() == Kind::top) return q;
  if (q.kind() == Kind::top) return p;
  if (p.kind() == Kind::bottom) return p;
  if (q.kind() == Kind::bottom) return q;
  Node n{Kind::conjunction};
  n.children = {p, q};
  return make(p.algebra(), std::move(n));
}

Predicate Predicate::disjunction(const Predicate& p, const Predicate& q) {
  require_same(p.algebra(), q.algebra());
  if (p.kind() == Kind::bottom) return q;
  if (q.kind() == Kind::bottom) return p;
  if (p.kind() == Kind::top) return p;
  if (q.kind() == Kind::top) return q;
  Node n{Kind::disjunction};
  n.children = {p, q};
  return make(p.algebra(), std::move(n));
}

Predicate::Kind Predicate::kind() const { return node_->kind; }

const Atom& Predicate::atom_value() const { return *node_->atom; }

const std::string& Predicate::name() const { return node_->name; }

const std::vector<Predicate>& Predicate::children() const { return node_->children; }

const Bdd& Predicate::diagram() const {
  if (!node_->diagram) throw AlgebraMismatch("predicate of " + algebra_.name() + " has no diagram");
  return *node_->diagram;
}

std::size_t Predicate::hash() const { return node_->hash; }

bool operator==(const Predicate& a, const Predicate& b) {
  if (a.node_ == b.node_) return a.algebra_ == b.algebra_;
  if (!(a.algebra_ == b.algebra_) || a.node_->hash != b.node_->hash || a.node_->kind != b.node_->kind)
    return false;
  return a.node_->atom == b.node_->atom && a.node_->name == b.node_->name &&
         a.node_->children == b.node_->children;
}

Predicate combine(BoolOp op, const Predicate& p, const std::optional<Predicate>& q) {
  if ((op == BoolOp::not_) != !q.has_value())
    throw std::invalid_argument("combine: second operand must be absent exactly for not");
  switch (op) {
    case BoolOp::and_: return Predicate::conjunction(p, *q);
    case BoolOp::or_: return Predicate::disjunction(p, *q);
    case BoolOp::not_: return Predicate::negation(p);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

bool compare(i128 lhs, Cmp cmp) {
  switch (cmp) {
    case Cmp::lt: return lhs < 0;
    case Cmp::le: return lhs <= 0;
    case Cmp::eq: return lhs == 0;
    case Cmp::ge: return lhs >= 0;
    case Cmp::gt: return lhs > 0;
    case Cmp::ne: return lhs != 0;
  }
  return false;
}

i128 mod_floor(i128 a, i128 m) {
  i128 r = a % m;
  return r < 0 ? r + m : r;
}

bool atom_holds(const Atom& a, std::int64_t x) {
  if (auto* l = std::get_if<LinearAtom>(&a)) return compare(i128{l->coef} * x + l->offset, l->cmp);
  if (auto* c = std::get_if<CongruenceAtom>(&a)) return mod_floor(x, c->modulus) == c->residue;
  return std::get<BitSetAtom>(a).diagram.evaluate(static_cast<std::uint64_t>(x));
}

bool eval_node(const Predicate& p, std::int64_t x) {
  using K = Predicate::Kind;
  switch (p.kind()) {
    case K::top: return true;
    case K::bottom: return false;
    case K::atom: return atom_holds(p.atom_value(), x);
    case K::named: return eval_node(p.children()[0], x);
    case K::negation: return !eval_node(p.children()[0], x);
    case K::conjunction: return eval_node(p.children()[0], x) && eval_node(p.children()[1], x);
    case K::disjunction: return eval_node(p.children()[0], x) || eval_node(p.children()[1], x);
  }
  return false;
}

}  // namespace

bool evaluate(const Predicate& p, Element d) {
  if (p.algebra().kind() == AlgebraId::Kind::bitvector) {
    unsigned w = p.algebra().width();
    if (d.value < 0 || static_cast<std::uint64_t>(d.value) >= (std::uint64_t{1} << w))
      throw AlgebraMismatch("element " + std::to_string(d.value) + " is not a " + std::to_string(w) +
                            "-bit vector");
    return p.diagram().evaluate(static_cast<std::uint64_t>(d.value));
  }
  return eval_node(p, d.value);
}

// ---------------------------------------------------------------------------
// Integer satisfiability: disjunctive normal form explored lazily, each
// conjunct decided by interval intersection plus a residue scan over one
// period of the congruences (extended once per excluded point).

namespace {

struct Conjunct {
  std::optional<i128> lo;
  std::optional<i128> hi;
  std::vector<i128> excluded;
  std::vector<CongruenceAtom> congruent;
  std::vector<CongruenceAtom> incongruent;
  bool empty = false;

  void lower(i128 v) { lo = lo ? std::max(*lo, v) : v; }
  void upper(i128 v) { hi = hi ? std::min(*hi, v) : v; }

  static i128 fdiv(i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
  }
  static i128 cdiv(i128 a, i128 b) { return -fdiv(-a, b); }

  static Cmp negate(Cmp c) {
    switch (c) {
      case Cmp::lt: return Cmp::ge;
      case Cmp::le: return Cmp::gt;
      case Cmp::eq: return Cmp::ne;
      case Cmp::ge: return Cmp::lt;
      case Cmp::gt: return Cmp::le;
      case Cmp::ne: return Cmp::eq;
    }
    return c;
  }
  static Cmp mirror(Cmp c) {
    switch (c) {
      case Cmp::lt: return Cmp::gt;
      case Cmp::le: return Cmp::ge;
      case Cmp::ge: return Cmp::le;
      case Cmp::gt: return Cmp::lt;
      default: return c;
    }
  }

  void add(const LinearAtom& atom, bool positive) {
    Cmp cmp = positive ? atom.cmp : negate(atom.cmp);
    i128 a = atom.coef;
    i128 c = -i128{atom.offset};  // a*x cmp c
    if (a == 0) {
      if (!compare(-c, cmp)) empty = true;
      return;
    }
    if (a < 0) {
      a = -a;
      c = -c;
      cmp = mirror(cmp);
    }
    switch (cmp) {
      case Cmp::lt: upper(fdiv(c - 1, a)); break;
      case Cmp::le: upper(fdiv(c, a)); break;
      case Cmp::gt: lower(fdiv(c, a) + 1); break;
      case Cmp::ge: lower(cdiv(c, a)); break;
      case Cmp::eq:
        if (c % a != 0) {
          empty = true;
        } else {
          lower(c / a);
          upper(c / a);
        }
        break;
      case Cmp::ne:
        if (c % a == 0) excluded.push_back(c / a);
        break;
    }
  }

  void add(const CongruenceAtom& atom, bool positive) {
    bool reachable = atom.residue >= 0 && atom.residue < atom.modulus;
    if (positive) {
      if (!reachable) empty = true;
      else congruent.push_back(atom);
    } else if (reachable) {
      incongruent.push_back(atom);
    }
  }

  bool admits(i128 x) const {
    for (i128 e : excluded)
      if (x == e) return false;
    for (const auto& c : congruent)
      if (mod_floor(x, c.modulus) != c.residue) return false;
    for (const auto& c : incongruent)
      if (mod_floor(x, c.modulus) == c.residue) return false;
    return true;
  }

  std::optional<std::int64_t> witness() const {
    if (empty || (lo && hi && *lo > *hi)) return std::nullopt;
    i128 period = 1;
    for (const auto* list : {&congruent, &incongruent})
      for (const auto& c : *list) {
        long long g = std::gcd(static_cast<long long>(period), static_cast<long long>(c.modulus));
        period = period / g * c.modulus;
        if (period > (i128{1} << 40)) throw ResourceLimit("congruence period too large");
      }
    const i128 span = period * static_cast<i128>(excluded.size() + 1);
    auto found = [&](i128 x) -> std::optional<std::int64_t> {
      if (x < INT64_MIN || x > INT64_MAX)
        throw ResourceLimit("integer witness exceeds 64 bits");
      return static_cast<std::int64_t>(x);
    };
    if (lo) {
      i128 end = *lo + span - 1;
      if (hi) end = std::min(end, *hi);
      for (i128 x = *lo; x <= end; ++x)
        if (admits(x)) return found(x);
    } else if (hi) {
      for (i128 x = *hi; x > *hi - span; --x)
        if (admits(x)) return found(x);
    } else {
      for (i128 i = 0; i <= span; ++i) {
        if (admits(i)) return found(i);
        if (i > 0 && admits(-i)) return found(-i);
      }
    }
    return std::nullopt;
  }
};

struct Goal {
  const Predicate* pred;
  bool positive;
};

std::optional<std::int64_t> search(std::vector<Goal> goals, Conjunct conj) {
  using K = Predicate::Kind;
  while (!goals.empty()) {
    Goal g = goals.back();
    goals.pop_back();
    const Predicate& p = *g.pred;
    switch (p.kind()) {
      case K::top:
        if (!g.positive) return std::nullopt;
        break;
      case K::bottom:
        if (g.positive) return std::nullopt;
        break;
      case K::atom:
        std::visit(
            [&](const auto& a) {
              using T = std::decay_t<decltype(a)>;
              if constexpr (!std::is_same_v<T, BitSetAtom>) conj.add(a, g.positive);
            },
            p.atom_value());
        if (conj.empty) return std::nullopt;
        break;
      case K::named: goals.push_back({&p.children()[0], g.positive}); break;
      case K::negation: goals.push_back({&p.children()[0], !g.positive}); break;
      case K::conjunction:
      case K::disjunction: {
        bool is_and = (p.kind() == K::conjunction) == g.positive;
        if (is_and) {
          goals.push_back({&p.children()[1], g.positive});
          goals.push_back({&p.children()[0], g.positive});
        } else {
          for (const auto& child : p.children()) {
            auto branch = goals;
            branch.push_back({&child, g.positive});
            if (auto w = search(std::move(branch), conj)) return w;
          }
          return std::nullopt;
        }
        break;
      }
    }
  }
  return conj.witness();
}

}  // namespace

std::optional<Element> is_satisfiable(const Predicate& p) {
  if (p.algebra().kind() == AlgebraId::Kind::bitvector) {
    auto v = p.diagram().min_element();
    if (!v) return std::nullopt;
    return Element{static_cast<std::int64_t>(*v)};
  }
  auto w = search({{&p, true}}, Conjunct{});
  if (!w) return std::nullopt;
  return Element{*w};
}

// ---------------------------------------------------------------------------
// Printing

namespace {

const char* cmp_text(Cmp c) {
  switch (c) {
    case Cmp::lt: return "<";
    case Cmp::le: return "<=";
    case Cmp::eq: return "==";
    case Cmp::ge: return ">=";
    case Cmp::gt: return ">";
    case Cmp::ne: return "!=";
  }
  return "?";
}

constexpr std::size_t kMaxPrintedValues = std::size_t{1} << 20;

void print(std::ostream& os, const Predicate& p) {
  using K = Predicate::Kind;
  switch (p.kind()) {
    case K::top: os << "true"; return;
    case K::bottom: os << "false"; return;
    case K::named: print(os, p.children()[0]); return;
    case K::negation:
      os << "!";
      if (p.children()[0].kind() == K::conjunction || p.children()[0].kind() == K::disjunction) {
        print(os, p.children()[0]);
      } else {
        os << "(";
        print(os, p.children()[0]);
        os << ")";
      }
      return;
    case K::conjunction:
    case K::disjunction:
      os << "(";
      print(os, p.children()[0]);
      os << (p.kind() == K::conjunction ? " && " : " || ");
      print(os, p.children()[1]);
      os << ")";
      return;
    case K::atom: break;
  }
  const Atom& a = p.atom_value();
  if (auto* l = std::get_if<LinearAtom>(&a)) {
    if (l->coef == 1) os << "x";
    else if (l->coef == -1) os << "-x";
    else os << l->coef << "*x";
    if (l->offset > 0) os << " + " << l->offset;
    else if (l->offset < 0) os << " - " << static_cast<unsigned long long>(-i128{l->offset});
    os << " " << cmp_text(l->cmp) << " 0";
  } else if (auto* c = std::get_if<CongruenceAtom>(&a)) {
    os << "x % " << c->modulus << " == " << c->residue;
  } else {
    const Bdd& d = std::get<BitSetAtom>(a).diagram;
    if (d.is_false()) {
      os << "false";
      return;
    }
    if (d.is_true()) {
      os << "true";
      return;
    }
    if (d.count() > kMaxPrintedValues) throw Error("bitvector set too large to print");
    os << "in {";
    bool first = true;
    for (auto v : d.values(kMaxPrintedValues)) {
      os << (first ? "" : ", ") << v;
      first = false;
    }
    os << "}";
  }
}

}  // namespace

std::string to_string(const Predicate& p) {
  std::ostringstream os;
  print(os, p);
  return os.str();
}

// ---------------------------------------------------------------------------

std::optional<Element> SatCache::is_satisfiable(const Predicate& p) {
  {
    std::lock_guard lock(mutex_);
    auto it = memo_.find(p);
    if (it != memo_.end()) return it->second;
  }
  auto result = sfacheck::is_satisfiable(p);
  std::lock_guard lock(mutex_);
  ++calls_;
  memo_.emplace(p, result);
  return result;
}

std::size_t SatCache::size() const {
  std::lock_guard lock(mutex_);
  return memo_.size();
}

std::size_t SatCache::oracle_calls() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

}  // namespace sfacheck
