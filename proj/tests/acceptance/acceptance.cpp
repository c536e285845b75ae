// Acceptance suite: one PASS/FAIL line per criterion.
//
// usage: acceptance FIXTURE_DIR [CLI_BINARY]

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "sfacheck/cli.hpp"
#include "sfacheck/random.hpp"
#include "sfacheck/sfa_file.hpp"

using namespace sfacheck;
namespace fs = std::filesystem;

namespace {

// Pinned limits.
constexpr double kExampleSeconds = 1.0;
constexpr double kEmptinessSeconds = 60.0;
constexpr double kCardinalitySeconds = 300.0;
constexpr std::size_t kEmptinessInstances = 500;
constexpr std::size_t kCardinalityInstances = 200;
constexpr std::size_t kTableAutomata = 100;
constexpr std::size_t kParikhLength = 6;
constexpr std::size_t kBapaInstances = 300;
constexpr std::size_t kBapaUniverse = 8;
// Largest admissible log-log slope of verifier time (and work) against input
// size; 1 is linear.
constexpr double kMaxVerifierSlope = 1.5;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Report {
  bool all = true;
  void line(int n, bool ok, const std::string& detail) {
    std::cout << "criterion " << n << ": " << (ok ? "PASS" : "FAIL") << "  " << detail << std::endl;
    all = all && ok;
  }
};

std::string fmt(double v, int digits = 3) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

// ---------------------------------------------------------------------------

void criterion1(Report& rep, const fs::path& dir) {
  struct Case {
    std::string file;
    std::function<bool(const Word&)> shape;
  };
  std::vector<Case> cases{
      {"odd_pos.sfa", [](const Word& w) { return w.empty(); }},
      {"odd_pos_card2.sfa",
       [](const Word& w) {
         return w.size() == 2 && std::all_of(w.begin(), w.end(), [](Element d) { return d.value > 0 && d.value % 2 == 1; });
       }},
      {"bv_prefix.sfa",
       [](const Word& w) {
         static const std::array<std::int64_t, 5> first{6, 14, 22, 38, 54};
         return !w.empty() && std::find(first.begin(), first.end(), w[0].value) != first.end();
       }},
  };
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    auto t0 = Clock::now();
    bool good = false;
    std::string shown = "none";
    try {
      SfaFile f = load_sfa_file((dir / c.file).string());
      SatResult r = f.cardinality ? check_sat_card(f.sfa, *f.cardinality) : check_sat(f.sfa);
      if (r.status == Status::sat && r.witness) {
        shown = "[";
        for (std::size_t i = 0; i < r.witness->size(); ++i) shown += (i ? "," : "") + std::to_string((*r.witness)[i].value);
        shown += "]";
        good = c.shape(*r.witness) && verify_witness(f.sfa, f.cardinality, *r.witness);
      }
    } catch (const std::exception& e) {
      shown = std::string("error: ") + e.what();
    }
    double s = seconds_since(t0);
    good = good && s < kExampleSeconds;
    ok = ok && good;
    detail += c.file + " " + shown + " " + fmt(s) + "s; ";
  }
  rep.line(1, ok, detail);
}

// ---------------------------------------------------------------------------

void criterion2(Report& rep) {
  auto t0 = Clock::now();
  InstanceRng rng(20260101);
  std::size_t agree = 0, sat = 0, witnesses_ok = 0;
  std::string failure;
  for (std::size_t i = 0; i < kEmptinessInstances; ++i) {
    Sfa m = random_sfa(rng);
    SatResult r = check_sat(m);
    bool expected = prune_and_reach(m);
    bool same = (r.status == Status::sat) == expected;
    agree += same;
    if (!same && failure.empty()) failure = " first mismatch at instance " + std::to_string(i);
    if (r.status == Status::sat) {
      ++sat;
      witnesses_ok += r.witness && verify_witness(m, std::nullopt, *r.witness);
    }
  }
  double s = seconds_since(t0);
  bool ok = agree == kEmptinessInstances && witnesses_ok == sat && s < kEmptinessSeconds;
  rep.line(2, ok,
           "agree " + std::to_string(agree) + "/" + std::to_string(kEmptinessInstances) + ", SAT witnesses verified " +
               std::to_string(witnesses_ok) + "/" + std::to_string(sat) + ", " + fmt(s) + "s (limit " +
               fmt(kEmptinessSeconds, 0) + "s)" + failure);
}

// ---------------------------------------------------------------------------

void criterion3(Report& rep) {
  auto t0 = Clock::now();
  InstanceRng rng(20260202);
  const auto domain = oracle::int_range(-8, 8);
  constexpr std::size_t kLen = 4;
  std::size_t brute_sat = 0, brute_sat_agree = 0;
  std::size_t covered = 0, covered_agree = 0;
  std::size_t decide_only = 0;
  std::size_t conservative = 0;
  std::size_t sat_witnesses = 0, witnesses_ok = 0;
  std::string failure;
  auto note = [&](const std::string& what, std::size_t i) {
    if (failure.empty()) failure = " first " + what + " at instance " + std::to_string(i);
  };
  for (std::size_t i = 0; i < kCardinalityInstances; ++i) {
    Sfa m = random_sfa(rng);
    CardinalityConstraint c = random_cardinality(rng, m);
    SatResult r = check_sat_card(m, c);
    SatResult b = brute_force_check(m, c, domain, kLen);

    if (r.status == Status::sat) {
      ++sat_witnesses;
      witnesses_ok += r.witness && verify_witness(m, c, *r.witness);
    }
    if (b.status == Status::sat) {
      ++brute_sat;
      if (r.status == Status::sat) ++brute_sat_agree;
      else note("brute-only SAT", i);
    } else if (r.status == Status::sat) {
      ++decide_only;
    }

    // With |U| <= max_len and every satisfiable region represented in the
    // domain, the brute-force search is complete, so the answers must match
    // exactly.
    if (oracle::domain_covers_regions(m, domain)) {
      ++covered;
      CardinalityConstraint bounded = c;
      bounded.formula = BapaFormula::conjunction(
          c.formula, BapaFormula::le(BapaTerm::card(SetExpr::universe()), BapaTerm::constant(Int(static_cast<long>(kLen)))));
      SatResult rb = check_sat_card(m, bounded);
      if (rb.status == b.status) ++covered_agree;
      else note("bounded mismatch", i);
      if (rb.status == Status::sat) {
        ++sat_witnesses;
        witnesses_ok += rb.witness && verify_witness(m, bounded, *rb.witness);
      }
    }

    SatResult plain = check_sat(m);
    SatResult trivial = check_sat_card(m, CardinalityConstraint{});
    if (plain.status == trivial.status) ++conservative;
    else note("conservativity failure", i);
  }
  double s = seconds_since(t0);
  bool ok = brute_sat_agree == brute_sat && covered_agree == covered && conservative == kCardinalityInstances &&
            witnesses_ok == sat_witnesses && s < kCardinalitySeconds;
  rep.line(3, ok,
           "brute SAT -> decide SAT " + std::to_string(brute_sat_agree) + "/" + std::to_string(brute_sat) +
               ", exact agreement on covered instances " + std::to_string(covered_agree) + "/" +
               std::to_string(covered) + ", decide-only SAT beyond bounds " + std::to_string(decide_only) +
               ", conservativity " + std::to_string(conservative) + "/" + std::to_string(kCardinalityInstances) +
               ", witnesses " + std::to_string(witnesses_ok) + "/" + std::to_string(sat_witnesses) + ", " + fmt(s) +
               "s (limit " + fmt(kCardinalitySeconds, 0) + "s)" + failure);
}

// ---------------------------------------------------------------------------

void criterion4(Report& rep) {
  auto t0 = Clock::now();
  double worst = 0;
  for (std::size_t n = 5; n <= 50; ++n) {
    for (std::size_t m : {1u, 2u, 3u}) {
      TableAutomaton a = oracle::chain_automaton(n, m);
      double size = static_cast<double>(a.state_count + a.transitions.size() + a.letters.size());
      worst = std::max(worst, static_cast<double>(node_count(parikh_formula(a).formula)) / size);
    }
  }
  bool linear = worst <= static_cast<double>(kParikhSizeConstant);

  InstanceRng rng(20260404);
  std::size_t exact = 0, queries = 0;
  std::string failure;
  for (std::size_t i = 0; i < kTableAutomata; ++i) {
    TableAutomaton a = random_table_automaton(rng, 5, 4, 8);
    ParikhFormula rho = parikh_formula(a);
    double size = static_cast<double>(a.state_count + a.transitions.size() + a.letters.size());
    worst = std::max(worst, static_cast<double>(node_count(rho.formula)) / size);
    auto members = parikh_members_upto(a, kParikhLength);
    bool good = true;
    for (std::size_t total = 0; total <= kParikhLength && good; ++total)
      oracle::compositions(a.letters.size(), total, [&](const std::vector<std::size_t>& v) {
        if (!good) return;
        ++queries;
        bool in_rho = pa_solve(oracle::with_counts(rho, v)).has_value();
        if (in_rho != (members.count(v) > 0)) good = false;
      });
    exact += good;
    if (!good && failure.empty()) failure = " first mismatch at automaton " + std::to_string(i);
  }
  linear = linear && worst <= static_cast<double>(kParikhSizeConstant);
  double s = seconds_since(t0);
  bool ok = linear && exact == kTableAutomata;
  rep.line(4, ok,
           "max nodes/(|Q|+|D|+m) = " + fmt(worst, 2) + " <= C = " + std::to_string(kParikhSizeConstant) +
               ", exact Parikh agreement " + std::to_string(exact) + "/" + std::to_string(kTableAutomata) + " (" +
               std::to_string(queries) + " count vectors), " + fmt(s) + "s" + failure);
}

// ---------------------------------------------------------------------------

struct VerifierPoint {
  double size;
  double work;
  double seconds;
};

double loglog_slope(const std::vector<VerifierPoint>& pts, double VerifierPoint::*y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& p : pts) {
    double lx = std::log(p.size), ly = std::log(p.*y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// |S1| >= 1 & ... & |Sn| >= 1 & |S1 & ... & Sn| = 1 & |U| = 1 with the single
// all-ones region as certificate. Full expansion would need 2^n regions.
std::vector<VerifierPoint> verifier_scaling() {
  std::vector<VerifierPoint> pts;
  for (std::size_t n : {4u, 8u, 12u, 16u, 24u, 32u, 40u, 48u, 56u, 63u}) {
    std::vector<std::string> vars;
    for (std::size_t i = 1; i <= n; ++i) vars.push_back("S" + std::to_string(i));
    BapaFormula f = BapaFormula::eq(BapaTerm::card(SetExpr::universe()), BapaTerm::constant(1));
    SetExpr all = SetExpr::var(vars[0]);
    for (std::size_t i = 1; i < n; ++i) all = SetExpr::intersection(all, SetExpr::var(vars[i]));
    f = BapaFormula::conjunction(f, BapaFormula::eq(BapaTerm::card(all), BapaTerm::constant(1)));
    for (const auto& v : vars)
      f = BapaFormula::conjunction(f, BapaFormula::le(BapaTerm::constant(1), BapaTerm::card(SetExpr::var(v))));

    Minterm top{std::vector<bool>(n, true)};
    VennSystem sys = venn_expand(f, vars, {top});
    SparseCertificate cert{{top.index()}, {}};
    cert.assignment[region_var(top)] = 1;
    for (const auto& k : sys.card_vars) cert.assignment[k] = 1;
    if (!qfbapa_verify(f, vars, cert)) return {};

    // Input size: formula text plus certificate entries.
    double size = static_cast<double>(to_string(f).size() + cert.assignment.size() + cert.regions.size());
    double work = static_cast<double>(node_count(sys.formula));
    double best = 1e300;
    for (int batch = 0; batch < 5; ++batch) {
      const int reps = 40;
      auto t0 = Clock::now();
      for (int r = 0; r < reps; ++r)
        if (!qfbapa_verify(f, vars, cert)) return {};
      best = std::min(best, seconds_since(t0) / reps);
    }
    pts.push_back({size, work, best});
  }
  return pts;
}

void criterion5(Report& rep) {
  auto t0 = Clock::now();
  InstanceRng rng(20260505);
  const std::vector<std::string> pool{"A", "B", "C"};
  std::size_t agree = 0, sat = 0, certified = 0, models_ok = 0, unbounded_ok = 0;
  std::string failure;
  for (std::size_t i = 0; i < kBapaInstances; ++i) {
    std::vector<std::string> vars(pool.begin(), pool.begin() + rng.uniform(1, 3));
    BapaFormula f = random_bapa(rng, vars, 4);
    std::vector<std::string> used = set_variables(f);

    auto enumerated = oracle::enumerate_bapa(f, used, kBapaUniverse);
    BapaFormula bounded = BapaFormula::conjunction(
        f, BapaFormula::le(BapaTerm::card(SetExpr::universe()), BapaTerm::constant(Int(static_cast<long>(kBapaUniverse)))));
    auto solved_bounded = qfbapa_solve(bounded, used);
    auto solved = qfbapa_solve(f, used);

    bool same = enumerated.has_value() == solved_bounded.has_value();
    // A model within the bound is a model.
    bool unbounded = !enumerated || solved.has_value();
    agree += same;
    unbounded_ok += unbounded;
    if ((!same || !unbounded) && failure.empty()) failure = " first mismatch at formula " + std::to_string(i) + ": " + to_string(f);

    if (solved) {
      ++sat;
      models_ok += !solved->sets || eval_bapa(f, *solved);
      auto cert = find_sparse_certificate(f);
      if (cert && cert->regions.size() <= sparsity_bound(cardinality_count(f), 1) && qfbapa_verify(f, *cert)) ++certified;
      else if (failure.empty()) failure = " no certificate for formula " + std::to_string(i);
    }
  }

  auto pts = verifier_scaling();
  double time_slope = pts.empty() ? 1e9 : loglog_slope(pts, &VerifierPoint::seconds);
  double work_slope = pts.empty() ? 1e9 : loglog_slope(pts, &VerifierPoint::work);
  bool scaling = time_slope <= kMaxVerifierSlope && work_slope <= kMaxVerifierSlope;

  double s = seconds_since(t0);
  bool ok = agree == kBapaInstances && unbounded_ok == kBapaInstances && certified == sat && models_ok == sat && scaling;
  std::string curve;
  if (!pts.empty())
    curve = " (n=4: " + fmt(pts.front().seconds * 1e6, 1) + "us, n=63: " + fmt(pts.back().seconds * 1e6, 1) + "us)";
  rep.line(5, ok,
           "enumeration agreement " + std::to_string(agree) + "/" + std::to_string(kBapaInstances) +
               ", SAT models valid " + std::to_string(models_ok) + "/" + std::to_string(sat) +
               ", sparse certificates " + std::to_string(certified) + "/" + std::to_string(sat) +
               ", verifier log-log slope time " + fmt(time_slope, 2) + " work " + fmt(work_slope, 2) + " (limit " +
               fmt(kMaxVerifierSlope, 1) + ")" + curve + ", " + fmt(s) + "s" + failure);
}

// ---------------------------------------------------------------------------

std::string capture(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return out.str() + "\n--stderr--\n" + err.str() + "\n--exit " + std::to_string(code);
}

std::optional<std::string> capture_process(const std::string& binary, const std::vector<std::string>& args) {
  std::string cmd = "'" + binary + "'";
  for (const auto& a : args) cmd += " '" + a + "'";
  cmd += " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return std::nullopt;
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  int status = pclose(p);
  return out + "\n--exit " + std::to_string(WEXITSTATUS(status));
}

void criterion6(Report& rep, const fs::path& dir, const std::string& binary) {
  auto t0 = Clock::now();
  std::vector<std::vector<std::string>> commands;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".sfa") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    const std::string f = p.string();
    commands.push_back({"check", f});
    commands.push_back({"check", f, "--witness"});
    commands.push_back({"check", f, "--witness", "--json"});
    commands.push_back({"check", f, "--method", "prune", "--witness"});
    commands.push_back({"check", f, "--method", "brute", "--witness", "--brute-dom=-4..4", "--brute-len", "4"});
    commands.push_back({"parikh", f});
  }
  commands.push_back({"qfbapa", "|A|=2 & |B|=2 & |A+B|=3"});
  commands.push_back({"qfbapa", "|A|=3 & A sub B & |B|=2", "--json"});
  commands.push_back({"qfbapa", "|U| = 0", "--json"});
  commands.push_back({"selftest"});

  std::size_t stable = 0, checked_processes = 0;
  std::string failure;
  for (const auto& c : commands) {
    std::string a = capture(c), b = capture(c);
    bool same = a == b;
    if (!binary.empty()) {
      auto p1 = capture_process(binary, c), p2 = capture_process(binary, c);
      checked_processes += 2;
      same = same && p1 && p2 && *p1 == *p2;
    }
    stable += same;
    if (!same && failure.empty()) failure = " first unstable command: " + c[0] + " " + (c.size() > 1 ? c[1] : "");
  }
  double s = seconds_since(t0);
  rep.line(6, stable == commands.size(),
           "byte-identical " + std::to_string(stable) + "/" + std::to_string(commands.size()) + " commands over " +
               std::to_string(files.size()) + " fixtures (" + std::to_string(checked_processes) +
               " process runs), " + fmt(s) + "s" + failure);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance FIXTURE_DIR [CLI_BINARY]\n";
    return 2;
  }
  const fs::path dir = argv[1];
  const std::string binary = argc > 2 ? argv[2] : "";
  std::string only = std::getenv("ACCEPTANCE_ONLY") ? std::getenv("ACCEPTANCE_ONLY") : "";
  auto wanted = [&](char c) { return only.empty() || only.find(c) != std::string::npos; };
  Report rep;
  if (wanted('1')) criterion1(rep, dir);
  if (wanted('2')) criterion2(rep);
  if (wanted('3')) criterion3(rep);
  if (wanted('4')) criterion4(rep);
  if (wanted('5')) criterion5(rep);
  if (wanted('6')) criterion6(rep, dir, binary);
  std::cout << (rep.all ? "ALL PASS" : "SOME FAILED") << std::endl;
  return rep.all ? 0 : 1;
}
