#include "sfacheck/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <sstream>

#include "sfacheck/decide.hpp"
#include "sfacheck/errors.hpp"
#include "sfacheck/parikh.hpp"
#include "sfacheck/qfbapa.hpp"
#include "sfacheck/random.hpp"
#include "sfacheck/sfa_file.hpp"

namespace sfacheck {

namespace {

using nlohmann::json;

constexpr int kSat = 0;
constexpr int kUnsat = 1;
constexpr int kError = 2;

json number(const Int& v) {
  if (fits_int64(v)) return json(to_int64(v));
  return json(v.get_str());
}

std::string word_text(const Word& w) {
  std::string s = "[";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(w[i].value);
  }
  return s + "]";
}

struct CheckArgs {
  std::string file;
  bool witness = false;
  bool json = false;
  std::string method = "decomp";
  std::string brute_dom;
  std::size_t brute_len = 4;
};

std::vector<Element> brute_domain(const std::string& spec, const AlgebraId& algebra) {
  std::int64_t lo = -8, hi = 8;
  if (algebra.kind() == AlgebraId::Kind::bitvector) {
    lo = 0;
    hi = std::min<std::int64_t>(16, static_cast<std::int64_t>((std::uint64_t{1} << std::min(algebra.width(), 62u)) - 1));
  }
  if (!spec.empty()) {
    auto dots = spec.find("..");
    if (dots == std::string::npos) throw SemanticError("--brute-dom expects LO..HI, got '" + spec + "'");
    try {
      std::size_t used = 0;
      std::string a = spec.substr(0, dots), b = spec.substr(dots + 2);
      lo = std::stoll(a, &used);
      if (used != a.size()) throw std::invalid_argument(a);
      hi = std::stoll(b, &used);
      if (used != b.size()) throw std::invalid_argument(b);
    } catch (const std::logic_error&) {
      throw SemanticError("--brute-dom expects LO..HI, got '" + spec + "'");
    }
    if (lo > hi) throw SemanticError("--brute-dom range is empty");
    if (hi - lo > 1000000) throw BoundExceeded("--brute-dom range is too large");
  }
  std::vector<Element> d;
  for (std::int64_t v = lo; v <= hi; ++v) d.push_back(Element{v});
  return d;
}

int check(const CheckArgs& a, std::ostream& out) {
  SfaFile f = load_sfa_file(a.file);
  SatResult r;
  if (a.method == "decomp") {
    r = f.cardinality ? check_sat_card(f.sfa, *f.cardinality) : check_sat(f.sfa);
  } else if (a.method == "prune") {
    if (f.cardinality) throw SemanticError("--method prune does not support cardinality constraints");
    r.witness = prune_and_reach_witness(f.sfa);
    r.status = r.witness ? Status::sat : Status::unsat;
  } else {
    r = brute_force_check(f.sfa, f.cardinality, brute_domain(a.brute_dom, f.algebra), a.brute_len);
  }
  if (r.status == Status::sat && !verify_witness(f.sfa, f.cardinality, *r.witness))
    throw std::logic_error("witness failed verification");

  out << to_string(r.status) << "\n";
  if (a.witness && r.witness) out << "witness=" << word_text(*r.witness) << "\n";
  if (a.json) {
    json rec;
    rec["status"] = to_string(r.status);
    rec["method"] = a.method;
    if (r.witness) {
      json w = json::array();
      for (const auto& d : *r.witness) w.push_back(d.value);
      rec["witness"] = w;
    } else {
      rec["witness"] = nullptr;
    }
    json diag;
    json regions = json::object();
    for (const auto& [beta, l] : r.diagnostics.regions) regions[beta] = number(l);
    diag["regions"] = regions;
    json ks = json::array();
    for (const auto& k : r.diagnostics.letter_counts) ks.push_back(number(k));
    diag["letter_counts"] = ks;
    json ys = json::array();
    for (const auto& y : r.diagnostics.flow) ys.push_back(number(y));
    diag["flow"] = ys;
    diag["letters"] = r.diagnostics.letters;
    diag["bounded"] = r.diagnostics.bounded;
    rec["diagnostics"] = diag;
    out << rec.dump() << "\n";
  }
  return r.status == Status::sat ? kSat : kUnsat;
}

int parikh(const std::string& file, std::ostream& out) {
  SfaFile f = load_sfa_file(file);
  Propositionalization prop = propositionalize(f.sfa);
  ParikhFormula rho = parikh_formula(prop.automaton);
  for (std::size_t i = 0; i < prop.generators.size(); ++i)
    out << "S" << i + 1 << " = " << guard_to_string(prop.generators[i]) << "\n";
  for (std::size_t j = 0; j < prop.automaton.letters.size(); ++j)
    out << "L" << j + 1 << " = " << to_string(prop.automaton.letters[j]) << "\n";
  out << "rho = " << to_string(rho.formula) << "\n";
  out << "nodes = " << node_count(rho.formula) << "\n";
  return kSat;
}

int qfbapa(const std::string& text, bool as_json, std::ostream& out) {
  BapaFormula f = parse_bapa(text);
  auto model = qfbapa_solve(f);
  out << (model ? "SAT" : "UNSAT") << "\n";
  if (!model) {
    if (as_json) out << json{{"status", "UNSAT"}}.dump() << "\n";
    return kUnsat;
  }
  out << "universe=" << model->universe.get_str() << "\n";
  if (model->sets) {
    for (const auto& v : model->set_vars) {
      out << v << "={";
      const auto& members = model->sets->at(v);
      for (std::size_t i = 0; i < members.size(); ++i) out << (i ? "," : "") << members[i];
      out << "}\n";
    }
  }
  for (const auto& [v, x] : model->ints) out << v << "=" << x.get_str() << "\n";
  if (as_json) {
    json rec;
    rec["status"] = "SAT";
    rec["universe"] = number(model->universe);
    json regions = json::object();
    for (std::size_t i = 0; i < model->regions.size(); ++i)
      regions[Minterm::from_index(i, model->set_vars.size()).str()] = number(model->regions[i]);
    rec["regions"] = regions;
    json ints = json::object();
    for (const auto& [v, x] : model->ints) ints[v] = number(x);
    rec["ints"] = ints;
    if (model->sets) rec["sets"] = *model->sets;
    out << rec.dump() << "\n";
  }
  return kSat;
}

// Small fixed-seed agreement runs of the decision procedures against their
// oracles.
int selftest(std::ostream& out) {
  bool ok = true;
  auto report = [&](const std::string& name, std::size_t passed, std::size_t total) {
    out << name << ": " << passed << "/" << total << "\n";
    ok = ok && passed == total;
  };

  {
    InstanceRng rng(1);
    std::size_t passed = 0, total = 60;
    for (std::size_t i = 0; i < total; ++i) {
      Sfa m = random_sfa(rng);
      SatResult r = check_sat(m);
      bool agree = (r.status == Status::sat) == prune_and_reach(m);
      if (agree && r.witness) agree = verify_witness(m, std::nullopt, *r.witness);
      passed += agree;
    }
    report("emptiness vs prune_and_reach", passed, total);
  }
  {
    InstanceRng rng(2);
    std::vector<Element> domain;
    for (std::int64_t v = -3; v <= 3; ++v) domain.push_back(Element{v});
    std::size_t passed = 0, total = 30;
    for (std::size_t i = 0; i < total; ++i) {
      Sfa m = random_sfa(rng);
      CardinalityConstraint c = random_cardinality(rng, m);
      SatResult r = check_sat_card(m, c);
      SatResult b = brute_force_check(m, c, domain, 3);
      bool agree = b.status == Status::unsat || r.status == Status::sat;
      if (agree && r.witness) agree = verify_witness(m, c, *r.witness);
      passed += agree;
    }
    report("cardinality vs brute force", passed, total);
  }
  {
    InstanceRng rng(3);
    std::size_t passed = 0, total = 30;
    for (std::size_t i = 0; i < total; ++i) {
      TableAutomaton a = random_table_automaton(rng, 4, 3, 6);
      ParikhFormula rho = parikh_formula(a);
      auto members = parikh_members_upto(a, 4);
      bool agree = true;
      for (const auto& counts : members) {
        std::vector<Formula> parts{rho.formula.body};
        for (std::size_t j = 0; j < counts.size(); ++j)
          parts.push_back(Formula::eq(Term::var(rho.letter_vars[j]), Term::constant(Int(static_cast<unsigned long>(counts[j])))));
        agree = agree && pa_solve({rho.formula.exists, Formula::conjunction(parts)}).has_value();
      }
      passed += agree;
    }
    report("parikh image members", passed, total);
  }
  out << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kSat : kError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Satisfiability of symbolic automata with cardinality constraints", "sfacheck"};
  app.require_subcommand(1);

  CheckArgs ca;
  auto* check_cmd = app.add_subcommand("check", "decide emptiness of an automaton file");
  check_cmd->add_option("file", ca.file, "automaton file")->required();
  check_cmd->add_flag("--witness", ca.witness, "print a witness word");
  check_cmd->add_option("--method", ca.method, "decision method")
      ->check(CLI::IsMember({"decomp", "prune", "brute"}));
  check_cmd->add_option("--brute-dom", ca.brute_dom, "brute-force element range LO..HI");
  check_cmd->add_option("--brute-len", ca.brute_len, "brute-force maximum word length");
  check_cmd->add_flag("--json", ca.json, "print a JSON record");

  std::string parikh_file;
  auto* parikh_cmd = app.add_subcommand("parikh", "print the Parikh image formula");
  parikh_cmd->add_option("file", parikh_file, "automaton file")->required();

  std::string expr;
  bool qjson = false;
  auto* qfbapa_cmd = app.add_subcommand("qfbapa", "solve a standalone QFBAPA formula");
  qfbapa_cmd->add_option("formula", expr, "formula text")->required();
  qfbapa_cmd->add_flag("--json", qjson, "print a JSON record");

  auto* selftest_cmd = app.add_subcommand("selftest", "run oracle agreement checks");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : kError;
  }

  try {
    if (check_cmd->parsed()) return check(ca, out);
    if (parikh_cmd->parsed()) return parikh(parikh_file, out);
    if (qfbapa_cmd->parsed()) return qfbapa(expr, qjson, out);
    if (selftest_cmd->parsed()) return selftest(out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

}  // namespace sfacheck
