// psp: command-line front end for the partial-strategyproofness toolkit.
//
//   psp analyze FILE [--audit N] [--seed S] [--audit-r R]
//   psp counterexample --epsilon E [--budget S_MAX]
//   psp transition --true P --false P [--r R] [--urbi-sq]
//   psp zoo --mechanism rsd|ps|phi [--n N] [--m M] [--s S] [--alpha A|mid] [--out FILE]
//
// --json (anywhere on the line) switches to a single JSON envelope on stdout.
// Exit codes: 0 ok, 1 verification failure, 2 input error, 3 budget exhausted.

#include <openssl/evp.h>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "psp/analysis.hpp"
#include "psp/counterexample.hpp"
#include "psp/errors.hpp"
#include "psp/geometry.hpp"
#include "psp/mechanism_io.hpp"

namespace {

using nlohmann::json;
using psp::Rational;

enum Exit : int { kOk = 0, kVerificationFailure = 1, kInputError = 2, kBudgetExhausted = 3 };

// Thrown for bad flag values that CLI11 cannot see (rationals, orders).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw psp::ParseError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Rational rational_flag(const std::string& flag, const std::string& text) {
  try {
    return psp::parse_rational(text);
  } catch (const psp::ParseError& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

// Everything a subcommand produces. Human text goes to stdout unless --json.
struct Report {
  json inputs = json::object();
  json result = json::object();
  std::ostringstream text;
  int status = kOk;
};

std::string yes_no(bool b) { return b ? "yes" : "no"; }

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string file;
  std::size_t audit = 0;
  std::uint64_t seed = 1;
  std::string audit_r;
};

void run_analyze(const AnalyzeArgs& args, Report& report) {
  const std::string bytes = read_file(args.file);
  report.inputs[args.file] = sha256_hex(bytes);
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw psp::ParseError(args.file + ": " + e.what());
  }
  const auto mech = psp::mechanism_from_json(doc);
  const auto& names = mech.names();
  const auto& s = mech.setting();

  auto& out = report.text;
  out << "mechanism: n = " << s.n << ", m = " << s.m << ", " << mech.profile_count()
      << " profiles\n";

  auto describe = [&](const char* label, const psp::CheckResult& check) {
    out << label << ": " << yes_no(check.holds);
    if (check.witness) out << " (" << check.witness->describe(names) << ")";
    out << "\n";
    json j{{"holds", check.holds}};
    j["witness"] = check.witness ? check.witness->to_json(names) : json(nullptr);
    return j;
  };
  const auto sd = psp::check_sd_sp(mech, psp::Scope::kGlobal);
  const auto ld = psp::check_ld_sp(mech, psp::Scope::kGlobal);
  report.result["sd_sp"] = describe("SD-SP", sd);
  report.result["ld_sp"] = describe("LD-SP", ld);

  psp::DegreeReport degrees;
  try {
    degrees = psp::verify_theorem1(mech);
  } catch (const psp::TheoremViolation& e) {
    out << "local sufficiency bound violated: " << e.what() << "\n";
    report.result["theorem1"] = {{"ok", false}, {"error", e.what()}};
    report.status = kVerificationFailure;
    return;
  }
  report.result["degrees"] = degrees.to_json(names);
  if (degrees.r_local == degrees.r_global) {
    out << "r_local = r_global = " << degrees.r_local.to_string() << "\n";
  } else {
    out << "r_local = " << degrees.r_local.to_string() << "\n";
    out << "r_global = " << degrees.r_global.to_string() << "\n";
  }
  if (degrees.binding_global) {
    out << "binding (global): " << degrees.binding_global->describe(names) << "\n";
  }
  out << "r_global - r_local^2 >= " << psp::to_string(degrees.theorem1_margin) << " ("
      << psp::to_decimal(degrees.theorem1_margin, 6) << "), local sufficiency "
      << (degrees.theorem1_ok ? "holds" : "fails") << "\n";
  if (!degrees.theorem1_ok) report.status = kVerificationFailure;

  if (args.audit == 0) return;
  // the lower end of the bracket is a discount the mechanism certainly meets
  Rational r = args.audit_r.empty() ? degrees.r_global.lower
                                    : rational_flag("--audit-r", args.audit_r);
  if (r <= 0) {
    out << "audit skipped: no positive discount to audit at\n";
    report.result["audit"] = nullptr;
    return;
  }
  const auto audit = psp::sampled_utility_audit(mech, r, args.audit, args.seed);
  report.result["audit"] = audit.to_json(names);
  out << "audit at r = " << psp::to_string(r) << ": " << audit.utilities << " utilities, "
      << audit.pairs_evaluated << " pairs sampled, " << audit.pairs_certified
      << " settled by SD, " << audit.violations << " violations\n";
  if (audit.first_violation) {
    out << "  first: " << audit.first_violation->manipulation.describe(names) << ", gain "
        << psp::to_string(-audit.first_violation->margin) << "\n";
  }
  if (audit.violations > 0) report.status = kVerificationFailure;
}

// ---------------------------------------------------------- counterexample

void run_counterexample(const std::string& epsilon_text, const std::string& budget_text,
                        Report& report) {
  const Rational epsilon = rational_flag("--epsilon", epsilon_text);
  const Rational budget = rational_flag("--budget", budget_text);
  if (epsilon <= 0 || epsilon >= 2) throw UsageError("--epsilon must lie in (0, 2)");
  if (budget < 2) throw UsageError("--budget must be at least 2");

  const auto cert = psp::find_witness(epsilon, budget);
  report.result = cert.to_json();
  auto& out = report.text;
  out << "epsilon = " << psp::to_string(epsilon) << "\n";
  out << "s = " << psp::to_string(cert.s) << " (" << cert.scanned << " values scanned)\n";
  out << "alpha = " << psp::to_string(cert.alpha) << " in local interval "
      << cert.local_interval.to_string() << "\n";
  out << "local check at r = 1/s: " << (cert.local_check ? "pass" : "FAIL") << "\n";
  if (cert.delta3) {
    out << "delta_3 (a>b>c>d -> c>a>b>d) in [" << cert.delta3->direct.lower_decimal(8) << ", "
        << cert.delta3->direct.upper_decimal(8) << "] at " << cert.delta3->precision
        << " bits\n";
  }
  out << "violating utility at r~ = " << psp::to_string(cert.r_tilde) << ":";
  for (const auto& v : cert.violating_utility.values) out << " " << psp::to_string(v);
  out << "\ngain from misreport = " << psp::to_string(cert.gain) << "\n";
  out << "r_global = " << cert.r_global.to_string() << ", r^2 <= r_global < r^(2-eps): "
      << yes_no(cert.r_global_bounds) << "\n";
  out << "certificate " << (cert.complete ? "complete" : "INCOMPLETE") << "\n";
  if (!cert.complete) report.status = kVerificationFailure;
}

// -------------------------------------------------------------- transition

struct TransitionArgs {
  std::string truth;
  std::string target;
  std::string r = "1/10";
  bool urbi_sq = false;
};

void run_transition(const TransitionArgs& args, Report& report) {
  std::vector<std::string> names;
  psp::PreferenceOrder truth, target;
  try {
    truth = psp::parse_order_with_letters(args.truth, names);
    target = psp::parse_order(args.target, names);
  } catch (const psp::ParseError& e) {
    throw UsageError(e.what());
  }
  const Rational r = rational_flag("--r", args.r);
  if (r <= 0 || r >= 1) throw UsageError("--r must lie in (0, 1)");

  const auto u = psp::geometric_utility(truth, args.urbi_sq ? Rational(r * r) : r);
  const auto choice = psp::choose_target_utility(u, truth, target, r);
  const psp::LineSegment seg(u, choice.target);
  const auto passed = psp::passed_sequence(seg);
  const auto canonical = psp::canonical_transition(truth, target);
  const auto cert = psp::urbi_passage_witness(seg, r);

  auto values = [](const psp::UtilityFunction& f) {
    json j = json::array();
    for (const auto& v : f.values) j.push_back(psp::to_string(v));
    return j;
  };
  json orders = json::array(), times = json::array();
  for (const auto& o : passed.orders) orders.push_back(psp::format_order(o, names));
  for (const auto& t : passed.times) times.push_back(psp::to_string(t));
  const bool matches = passed.orders == canonical;
  report.result = {{"objects", names},
                   {"r", psp::to_string(r)},
                   {"start", values(u)},
                   {"start_urbi", args.urbi_sq ? "r^2" : "r"},
                   {"base", psp::to_string(choice.base)},
                   {"target", values(choice.target)},
                   {"canonical_conditions", choice.canonical},
                   {"windows_separated", choice.separated},
                   {"sequence", orders},
                   {"times", times},
                   {"matches_canonical", matches},
                   {"certificate", cert.to_json(names)}};

  auto& out = report.text;
  out << "C = " << psp::to_string(choice.base) << "\n";
  for (std::size_t k = 0; k < passed.orders.size(); ++k) {
    out << "  " << psp::format_order(passed.orders[k], names);
    if (k < cert.witnesses.size()) out << "  witness " << psp::to_string(cert.witnesses[k]);
    if (k < passed.times.size()) out << "  swap at " << psp::to_string(passed.times[k]);
    out << "\n";
  }
  out << passed.orders.size() << " orders, " << (matches ? "matches" : "DIFFERS FROM")
      << " the bubble-sort transition\n";
  if (cert.complete) {
    out << "every order passed inside URBI(" << psp::to_string(r) << ")\n";
  } else if (cert.simultaneous) {
    out << "no certificate: two swaps happen at the same alpha\n";
  } else {
    out << "no certificate: " << psp::format_order(cert.orders[*cert.failed_at], names)
        << " is never passed inside URBI(" << psp::to_string(r) << ")\n";
  }
  // only a start in URBI(r^2) comes with a guarantee
  if (!matches || (args.urbi_sq && !cert.complete)) report.status = kVerificationFailure;
}

// --------------------------------------------------------------------- zoo

struct ZooArgs {
  std::string mechanism;
  std::size_t n = 2;
  std::size_t m = 3;
  std::string s = "10";
  std::string alpha = "mid";
  std::string out;
};

void run_zoo(const ZooArgs& args, Report& report, bool& raw_stdout) {
  psp::TabulatedMechanism mech = [&] {
    if (args.mechanism == "phi") {
      const Rational s = rational_flag("--s", args.s);
      if (s <= 1) throw UsageError("--s must exceed 1");
      Rational alpha = args.alpha == "mid" ? psp::derived_local_interval(s).interval.midpoint()
                                           : rational_flag("--alpha", args.alpha);
      report.result["s"] = psp::to_string(s);
      report.result["alpha"] = psp::to_string(alpha);
      return psp::build_phi(psp::PhiParams(s, alpha));
    }
    if (args.n < 1 || args.m < 1 || args.n > psp::kMaxCorpusAgents ||
        args.m > psp::kMaxCorpusObjects) {
      throw UsageError("--n and --m must lie in 1.." + std::to_string(psp::kMaxCorpusObjects));
    }
    const auto setting = psp::Setting::covering(args.n, args.m);
    return args.mechanism == "rsd" ? psp::tabulate_rsd(setting) : psp::tabulate_ps(setting);
  }();

  const std::string text = psp::dump_mechanism(mech);
  report.result["mechanism"] = args.mechanism;
  report.result["n"] = mech.agents();
  report.result["m"] = mech.objects();
  report.result["profiles"] = mech.profile_count();
  report.result["distinct_rows"] = mech.pool_size();
  report.result["sha256"] = sha256_hex(text);
  if (args.out.empty()) {
    raw_stdout = true;
    std::cout << text;
    return;
  }
  std::ofstream file(args.out, std::ios::binary);
  file << text;
  if (!file) throw psp::ParseError("cannot write " + args.out);
  report.result["out"] = args.out;
  report.text << "wrote " << args.out << ": " << mech.profile_count() << " profiles, "
              << mech.pool_size() << " distinct rows\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial strategyproofness of random assignment mechanisms"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  app.add_flag("--json", as_json, "emit one JSON envelope instead of text");

  AnalyzeArgs analyze;
  auto* cmd_analyze = app.add_subcommand("analyze", "strategyproofness report for a table file");
  cmd_analyze->add_option("file", analyze.file, "mechanism JSON file")->required();
  cmd_analyze->add_option("--audit", analyze.audit, "sampled utilities per truthful order");
  cmd_analyze->add_option("--seed", analyze.seed, "audit seed");
  cmd_analyze->add_option("--audit-r", analyze.audit_r, "audit discount (default: r_global)");

  std::string epsilon, budget = "1000000";
  auto* cmd_counter = app.add_subcommand("counterexample", "witness that r^2 is tight");
  cmd_counter->add_option("--epsilon", epsilon, "exponent slack, 0 < E < 2")->required();
  cmd_counter->add_option("--budget", budget, "largest s to try");

  TransitionArgs transition;
  auto* cmd_transition = app.add_subcommand("transition", "walk u -> v between two orders");
  cmd_transition->add_option("--true", transition.truth, "true order, e.g. a>b>c")->required();
  cmd_transition->add_option("--false", transition.target, "target order")->required();
  cmd_transition->add_option("--r", transition.r, "URBI discount");
  cmd_transition->add_flag("--urbi-sq", transition.urbi_sq, "start in URBI(r^2)");

  ZooArgs zoo;
  auto* cmd_zoo = app.add_subcommand("zoo", "write a mechanism table");
  cmd_zoo->add_option("--mechanism", zoo.mechanism)
      ->required()
      ->check(CLI::IsMember({"rsd", "ps", "phi"}));
  cmd_zoo->add_option("--n", zoo.n, "agents");
  cmd_zoo->add_option("--m", zoo.m, "objects");
  cmd_zoo->add_option("--s", zoo.s, "phi: s > 1");
  cmd_zoo->add_option("--alpha", zoo.alpha, "phi: alpha, or mid");
  cmd_zoo->add_option("--out", zoo.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  Report report;
  bool raw_stdout = false;
  std::string error;
  try {
    if (*cmd_analyze) run_analyze(analyze, report);
    if (*cmd_counter) run_counterexample(epsilon, budget, report);
    if (*cmd_transition) run_transition(transition, report);
    if (*cmd_zoo) run_zoo(zoo, report, raw_stdout);
  } catch (const psp::BudgetExhausted& e) {
    error = std::string(e.what()) + " (last s tried: " + e.last_scanned() + ")";
    report.status = kBudgetExhausted;
  } catch (const psp::TheoremViolation& e) {
    error = e.what();
    report.status = kVerificationFailure;
  } catch (const psp::CrossCheckFailure& e) {
    error = e.what();
    report.status = kVerificationFailure;
  } catch (const std::exception& e) {
    // parse, validation, guard and domain errors are all the caller's input
    error = e.what();
    report.status = kInputError;
  }

  if (as_json) {
    json envelope;
    envelope["command"] = std::vector<std::string>(argv + 1, argv + argc);
    envelope["inputs"] = report.inputs;
    envelope["result"] = error.empty() ? report.result : json(nullptr);
    if (!error.empty()) envelope["error"] = error;
    envelope["exit_status"] = report.status;
    if (!raw_stdout) std::cout << envelope.dump(2) << "\n";
    else std::cerr << envelope.dump(2) << "\n";
  } else {
    if (!raw_stdout) std::cout << report.text.str();
    if (!error.empty()) std::cerr << "error: " << error << "\n";
  }
  return report.status;
}
