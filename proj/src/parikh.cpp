#include "sfacheck/parikh.hpp"

#include <algorithm>

#include "sfacheck/errors.hpp"

namespace sfacheck {

namespace {

std::string name(const char* prefix, std::size_t i) { return std::string(prefix) + "." + std::to_string(i); }

Term sum_of(const std::vector<std::string>& vars) {
  std::vector<Term> ts;
  for (const auto& v : vars) ts.push_back(Term::var(v));
  return Term::sum(std::move(ts));
}

}  // namespace

ParikhFormula parikh_formula(const TableAutomaton& a) {
  ParikhFormula out;
  out.initial = a.initial;
  const std::size_t n = a.state_count;
  const std::size_t m = a.letters.size();
  const Term zero = Term::constant(0);
  const Term one = Term::constant(1);

  for (std::size_t j = 0; j < m; ++j) out.letter_vars.push_back(name("k", j + 1));
  for (std::size_t t = 0; t < a.transitions.size(); ++t) out.flow_vars.push_back(name("y", t));
  for (std::size_t q = 0; q < n; ++q) out.depth_vars.push_back(name("z", q));
  std::vector<std::string> selector_of(n);
  for (std::size_t q = 0; q < n; ++q) {
    if (!a.accepting[q]) continue;
    out.finals.push_back(q);
    out.selector_vars.push_back(name("e", q));
    selector_of[q] = out.selector_vars.back();
  }

  std::vector<std::vector<std::string>> in(n), outgoing(n), by_letter(m);
  for (std::size_t t = 0; t < a.transitions.size(); ++t) {
    const auto& tr = a.transitions[t];
    in[tr.target].push_back(out.flow_vars[t]);
    outgoing[tr.source].push_back(out.flow_vars[t]);
    by_letter[tr.letter].push_back(out.flow_vars[t]);
  }

  std::vector<Formula> always;
  for (const auto& y : out.flow_vars) always.push_back(Formula::le(zero, Term::var(y)));
  for (std::size_t j = 0; j < m; ++j)
    always.push_back(Formula::eq(Term::var(out.letter_vars[j]), sum_of(by_letter[j])));

  std::vector<Formula> main;
  for (const auto& e : out.selector_vars) {
    main.push_back(Formula::le(zero, Term::var(e)));
    main.push_back(Formula::le(Term::var(e), one));
  }
  main.push_back(Formula::eq(sum_of(out.selector_vars), one));
  for (std::size_t q = 0; q < n; ++q) {
    // inflow + [q = q0] = outflow + e.q
    Term lhs = sum_of(in[q]);
    if (q == a.initial) lhs = lhs + one;
    Term rhs = sum_of(outgoing[q]);
    if (a.accepting[q]) rhs = rhs + Term::var(selector_of[q]);
    main.push_back(Formula::eq(lhs, rhs));
  }
  main.push_back(Formula::eq(Term::var(out.depth_vars[a.initial]), one));
  for (std::size_t q = 0; q < n; ++q) {
    if (q == a.initial) continue;
    const Term zq = Term::var(out.depth_vars[q]);
    std::vector<Formula> options{Formula::eq(zq, zero) && Formula::eq(sum_of(in[q]), zero)};
    for (std::size_t t = 0; t < a.transitions.size(); ++t) {
      const auto& tr = a.transitions[t];
      if (tr.target != q || tr.source == q) continue;
      const Term zs = Term::var(out.depth_vars[tr.source]);
      options.push_back(Formula::conjunction({Formula::le(one, Term::var(out.flow_vars[t])), Formula::le(one, zs),
                                              Formula::eq(zq, zs + one)}));
    }
    main.push_back(Formula::disjunction(std::move(options)));
  }
  Formula body = Formula::conjunction(std::move(main));

  if (a.accepting[a.initial]) {
    std::vector<Formula> eps;
    for (const auto& y : out.flow_vars) eps.push_back(Formula::eq(Term::var(y), zero));
    for (const auto& e : out.selector_vars) eps.push_back(Formula::eq(Term::var(e), zero));
    for (const auto& z : out.depth_vars) eps.push_back(Formula::eq(Term::var(z), zero));
    body = Formula::conjunction(std::move(eps)) || body;
  }
  always.push_back(body);

  out.formula.exists = out.flow_vars;
  out.formula.exists.insert(out.formula.exists.end(), out.selector_vars.begin(), out.selector_vars.end());
  out.formula.exists.insert(out.formula.exists.end(), out.depth_vars.begin(), out.depth_vars.end());
  out.formula.body = Formula::conjunction(std::move(always));
  return out;
}

FlowModel flow_of(const ParikhFormula& rho, const IntAssignment& model) {
  FlowModel flow;
  for (const auto& y : rho.flow_vars) flow.y.push_back(model.at(y));
  for (const auto& z : rho.depth_vars) flow.z.push_back(model.at(z));
  // All selectors are 0 only in the epsilon case, which ends in q0.
  flow.final_state = rho.initial;
  for (std::size_t i = 0; i < rho.finals.size(); ++i) {
    if (model.at(rho.selector_vars[i]) == 1) {
      flow.final_state = rho.finals[i];
      break;
    }
  }
  return flow;
}

std::set<std::vector<std::size_t>> parikh_members_upto(const TableAutomaton& a, std::size_t len) {
  if (len > 12) throw BoundExceeded("parikh enumeration is limited to length 12");
  const std::size_t m = a.letters.size();
  std::set<std::vector<std::size_t>> members;
  std::set<std::pair<StateId, std::vector<std::size_t>>> layer{{a.initial, std::vector<std::size_t>(m, 0)}};
  for (std::size_t step = 0;; ++step) {
    for (const auto& [q, counts] : layer)
      if (a.accepting[q]) members.insert(counts);
    if (step == len) break;
    std::set<std::pair<StateId, std::vector<std::size_t>>> next;
    for (const auto& [q, counts] : layer) {
      for (const auto& t : a.transitions) {
        if (t.source != q) continue;
        auto c = counts;
        ++c[t.letter];
        next.emplace(t.target, std::move(c));
      }
    }
    layer = std::move(next);
  }
  return members;
}

std::vector<std::size_t> realize_path(const TableAutomaton& a, const FlowModel& flow) {
  const std::size_t n = a.state_count;
  const std::size_t T = a.transitions.size();
  if (flow.y.size() != T) throw InvalidFlow("flow has " + std::to_string(flow.y.size()) + " entries, expected " +
                                            std::to_string(T));
  if (flow.final_state >= n || !a.accepting[flow.final_state]) throw InvalidFlow("final state is not accepting");
  Int total = 0;
  for (const auto& y : flow.y) {
    if (y < 0) throw InvalidFlow("negative transition count");
    total += y;
  }
  if (total > 10000000) throw ResourceLimit("flow of " + total.get_str() + " steps is too long to realize");

  std::vector<Int> balance(n, Int(0));  // inflow - outflow
  for (std::size_t t = 0; t < T; ++t) {
    balance[a.transitions[t].target] += flow.y[t];
    balance[a.transitions[t].source] -= flow.y[t];
  }
  for (std::size_t q = 0; q < n; ++q) {
    long expected = (q == flow.final_state ? 1 : 0) - (q == a.initial ? 1 : 0);
    if (balance[q] != expected) throw InvalidFlow("flow conservation fails at state " + std::to_string(q));
  }

  std::vector<std::vector<std::size_t>> adjacency(n);
  std::vector<std::size_t> remaining(T);
  for (std::size_t t = 0; t < T; ++t) {
    remaining[t] = flow.y[t].get_ui();
    if (remaining[t]) adjacency[a.transitions[t].source].push_back(t);
  }
  // Connectivity: every used edge must hang off the part reachable from q0.
  std::vector<bool> reached(n, false);
  std::vector<StateId> todo{a.initial};
  reached[a.initial] = true;
  while (!todo.empty()) {
    StateId q = todo.back();
    todo.pop_back();
    for (std::size_t t : adjacency[q]) {
      StateId r = a.transitions[t].target;
      if (!reached[r]) {
        reached[r] = true;
        todo.push_back(r);
      }
    }
  }
  for (std::size_t t = 0; t < T; ++t)
    if (remaining[t] && !reached[a.transitions[t].source])
      throw InvalidFlow("transition " + std::to_string(t) + " is used but disconnected from the initial state");

  // Hierholzer, taking edges in declaration order.
  std::vector<std::size_t> cursor(n, 0);
  std::vector<std::pair<StateId, std::size_t>> stack{{a.initial, SIZE_MAX}};
  std::vector<std::size_t> path;
  while (!stack.empty()) {
    StateId v = stack.back().first;
    auto& adj = adjacency[v];
    while (cursor[v] < adj.size() && remaining[adj[cursor[v]]] == 0) ++cursor[v];
    if (cursor[v] < adj.size()) {
      std::size_t t = adj[cursor[v]];
      --remaining[t];
      stack.emplace_back(a.transitions[t].target, t);
    } else {
      if (stack.back().second != SIZE_MAX) path.push_back(stack.back().second);
      stack.pop_back();
    }
  }
  std::reverse(path.begin(), path.end());
  std::vector<std::size_t> letters;
  letters.reserve(path.size());
  for (std::size_t t : path) letters.push_back(a.transitions[t].letter);
  return letters;
}

}  // namespace sfacheck
