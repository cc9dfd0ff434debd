// Command-line driver: classify catalog functions, build witness ledgers,
// print Venn placements, emit plot tables, and run the acceptance suite.
//
// Exit codes: 0 success, 2 parse error (expression, family, or argument),
// 3 Unknown verdict under --strict, 4 internal lattice violation or a
// failed independent re-check of a generated certificate.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "funcspace/acceptance.hpp"
#include "funcspace/dsl.hpp"
#include "funcspace/report.hpp"

namespace {

using namespace funcspace;

constexpr int kExitParse = 2;
constexpr int kExitStrictUnknown = 3;
constexpr int kExitInternal = 4;

std::optional<Rational> rational_arg(const std::string& text) {
  std::size_t slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    BigInt n(text.substr(0, slash));
    BigInt d(text.substr(slash + 1));
    if (d == 0) return std::nullopt;
    return Rational(n, d);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

/// Expands "@path" arguments to the file's contents.
std::optional<std::string> source_text(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::ifstream in(arg.substr(1));
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path);
  if (!out) return false;
  out << bytes;
  return bool(out);
}

std::string decimal(const Rational& r) { return decimal_string(r, 6); }

void print_verdicts(const Json& report) {
  std::cout << "function: " << report["function"].get<std::string>() << "\n";
  for (const auto& v : report["verdicts"]) {
    std::cout << "  " << v["space"].get<std::string>() << ": "
              << v["status"].get<std::string>();
    std::string reason = v["reason"].get<std::string>();
    if (!reason.empty()) std::cout << "  (" << reason << ")";
    std::cout << "\n";
  }
  std::cout << "placement: " << report["placement"].get<std::string>() << "\n";
}

int emit_json(const Json& j, const std::string& path) {
  if (path.empty()) return 0;
  if (!write_file(path, j.dump(2) + "\n")) {
    std::cerr << "error: cannot write " << path << "\n";
    return 1;
  }
  return 0;
}

int run_classify(const std::string& arg, unsigned long depth, bool strict,
                 const std::string& json_path) {
  auto text = source_text(arg);
  if (!text) {
    std::cerr << "error: cannot read " << arg.substr(1) << "\n";
    return kExitParse;
  }
  auto f = parse_function(*text);
  if (!f) {
    std::cerr << f.error() << "\n";
    return kExitParse;
  }
  classifier::Options opts;
  opts.depth = depth;
  Json report;
  try {
    report = classify_report(*f, opts);
  } catch (const LatticeViolation& e) {
    std::cerr << "lattice violation: " << e.what() << "\n";
    return kExitInternal;
  }
  print_verdicts(report);
  if (int rc = emit_json(report, json_path)) return rc;
  if (strict) {
    for (const auto& v : report["verdicts"]) {
      if (v["status"].get<std::string>() == "Unknown") {
        std::cerr << "strict: verdict for " << v["space"].get<std::string>()
                  << " is Unknown\n";
        return kExitStrictUnknown;
      }
    }
  }
  return 0;
}

int run_venn(const std::string& funcs, unsigned long depth) {
  std::vector<std::string> items;
  std::string cur;
  for (char ch : funcs + ",") {
    if (ch == ',') {
      if (!cur.empty()) items.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur += ch;
    }
  }
  if (items.empty()) {
    std::cerr << "error: --funcs needs at least one expression\n";
    return kExitParse;
  }
  classifier::Options opts;
  opts.depth = depth;
  for (const std::string& item : items) {
    auto f = parse_function(item);
    if (!f) {
      std::cerr << f.error() << "\n";
      return kExitParse;
    }
    try {
      VennPlacement p = classify(*f, opts);
      std::cout << to_text(*f) << ": " << placement_line(p) << "\n";
    } catch (const LatticeViolation& e) {
      std::cerr << "lattice violation: " << e.what() << "\n";
      return kExitInternal;
    }
  }
  return 0;
}

int run_witness_ac_failure(const Rational& delta, unsigned long count,
                           const std::string& json_path) {
  ACFailureWitness w;
  try {
    w = ac_failure_intervals(delta, count);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  std::cout << "pairs: " << w.pairs.size() << " intervals (2i, 2i + delta/i^2), delta = "
            << to_string(w.delta) << "\n";
  std::cout << "length_sum: " << to_string(w.length_sum.lo) << " = "
            << decimal(w.length_sum.lo) << " < 2*delta = " << to_string(Rational(2 * w.delta))
            << "\n";
  std::cout << "variation_sum: [" << to_string(w.variation_sum.lo) << ", "
            << to_string(w.variation_sum.hi) << "] ~ " << decimal(w.variation_sum.lo) << "\n";
  std::cout << "epsilon_claim: " << to_string(w.epsilon_claim) << "\n";
  auto rep = verify_witness(w);
  if (!rep) {
    std::cerr << "verification failed: " << rep.error() << "\n";
    return kExitInternal;
  }
  std::cout << "verification: ok (" << rep->checks << " checks)\n";
  return emit_json(json_of(w), json_path);
}

int run_witness_set_a(unsigned long depth, const std::string& json_path) {
  SetACertificate cert = application_set_A(depth);
  Enclosure m = cert.set_measure.enclosure();
  std::cout << "set: " << cert.family.to_text() << "\n";
  std::cout << "measure: [" << decimal(m.lo) << ", " << decimal(m.hi) << "]\n";
  std::cout << "derivative integral: "
            << (cert.derivative_integral.value.is_infinite() ? "divergent" : "not resolved")
            << "\n";
  if (!cert.derivative_integral.ledger.empty()) {
    const auto& last = cert.derivative_integral.ledger.back();
    std::cout << "ledger: partial sum at n = " << last.first << " is "
              << to_string(last.second) << " ~ " << decimal(last.second) << "\n";
  }
  std::cout << cert.conclusion << "\n";
  return emit_json(json_of(cert), json_path);
}

int run_witness_thm1(const std::string& fexpr, unsigned long count, const Rational& eps,
                     const std::string& json_path) {
  auto f = parse_function(fexpr);
  if (!f) {
    std::cerr << f.error() << "\n";
    return kExitParse;
  }
  auto led = theorem1_adversary(*f, count, eps);
  if (!led) {
    std::cerr << "error: " << led.error() << "\n";
    return 1;
  }
  Rational total(0);
  for (const auto& b : led->per_family_lower_bounds) total += b;
  std::cout << "families: " << led->families.size() << " disjoint, measure budgets 1/n^2\n";
  std::cout << "union measure: " << to_string(led->union_measure.lo) << " ~ "
            << decimal(led->union_measure.lo) << "\n";
  std::cout << "per-family integral bounds: all >= epsilon*(1 - 1/n^2), epsilon = "
            << to_string(led->epsilon) << "\n";
  std::cout << "sum of bounds: " << decimal(total) << "\n";
  std::cout << "divergence: " << led->union_divergence.note << "\n";
  auto rep = verify_ledger(*led);
  if (!rep) {
    std::cerr << "verification failed: " << rep.error() << "\n";
    return kExitInternal;
  }
  std::cout << "verification: ok (" << rep->checks << " checks)\n";
  return emit_json(json_of(*led), json_path);
}

int run_witness_thm2(const std::string& fexpr, unsigned long depth,
                     const std::string& json_path) {
  auto f = parse_function(fexpr);
  if (!f) {
    std::cerr << f.error() << "\n";
    return kExitParse;
  }
  auto led = theorem2_construction(*f, depth);
  if (!led) {
    std::cerr << "error: " << led.error() << "\n";
    return 1;
  }
  Rational total(0), harmonic(0);
  for (std::size_t i = 0; i < led->integral_lower_bounds.size(); ++i) {
    total += led->integral_lower_bounds[i];
    harmonic += Rational(1, BigInt(i + 1));
  }
  std::cout << "pieces: " << led->pieces.size()
            << " disjoint, each inside {|f| >= n} with 1/n^2 <= measure <= 2/n^2\n";
  std::cout << "sum of integral lower bounds: " << to_string(total) << " ~ " << decimal(total)
            << " >= H_" << led->pieces.size() << " = " << to_string(harmonic) << " ~ "
            << decimal(harmonic) << "\n";
  auto rep = verify_ledger(*led);
  if (!rep) {
    std::cerr << "verification failed: " << rep.error() << "\n";
    return kExitInternal;
  }
  std::cout << "verification: ok (" << rep->checks << " checks)\n";
  return emit_json(json_of(*led), json_path);
}

int run_plot(const std::string& fexpr, const std::string& range, unsigned long samples,
             const std::string& marks_expr, const std::string& out_path) {
  auto f = parse_function(fexpr);
  if (!f) {
    std::cerr << f.error() << "\n";
    return kExitParse;
  }
  std::size_t colon = range.find(':');
  auto lo = colon == std::string::npos ? std::nullopt : rational_arg(range.substr(0, colon));
  auto hi = colon == std::string::npos ? std::nullopt : rational_arg(range.substr(colon + 1));
  if (!lo || !hi) {
    std::cerr << "error: --range expects rational bounds 'a:b', got '" << range << "'\n";
    return kExitParse;
  }
  std::optional<IntervalFamily> marks;
  if (!marks_expr.empty()) {
    auto fam = parse_family(marks_expr);
    if (!fam) {
      std::cerr << fam.error() << "\n";
      return kExitParse;
    }
    marks = *fam;
  }
  auto csv = plot_csv(*f, *lo, *hi, samples, marks ? &*marks : nullptr);
  if (!csv) {
    std::cerr << "error: " << csv.error() << "\n";
    return kExitParse;
  }
  if (!write_file(out_path, *csv)) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return 1;
  }
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int run_verify() {
  int failures = 0;
  for (const CriterionResult& r : run_acceptance()) {
    std::cout << format_line(r) << "\n";
    if (!r.passed) ++failures;
  }
  if (failures == 0) {
    std::cout << "all 9 criteria passed\n";
    return 0;
  }
  std::cout << failures << " of 9 criteria failed\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified membership in integrability and absolute-continuity classes"};
  app.require_subcommand(1);

  std::string expr, json_path, funcs, fexpr, range, marks, out_path, delta_s = "1/4",
                                                                     eps_s = "1/2";
  unsigned long depth = 100, count = 0, samples = 0;
  bool strict = false;

  CLI::App* classify_cmd = app.add_subcommand("classify", "classify an expression or @file");
  classify_cmd->add_option("expr", expr, "function expression or @path")->required();
  classify_cmd->add_option("--depth", depth, "tail materialization depth");
  classify_cmd->add_flag("--strict", strict, "fail on Unknown verdicts");
  classify_cmd->add_option("--json", json_path, "write the full JSON report here");

  CLI::App* witness_cmd = app.add_subcommand("witness", "construct a certified witness object");
  std::string kind;
  witness_cmd->add_option("kind", kind, "ac-failure | thm1 | thm2 | set-A")
      ->required()
      ->check(CLI::IsMember({"ac-failure", "thm1", "thm2", "set-A"}));
  witness_cmd->add_option("--f", fexpr, "generator expression");
  witness_cmd->add_option("--delta", delta_s, "interval depth parameter (rational)");
  witness_cmd->add_option("--count", count, "pair count / family count");
  witness_cmd->add_option("--depth", depth, "ledger depth");
  witness_cmd->add_option("--eps", eps_s, "integral lower-bound target (rational)");
  witness_cmd->add_option("--json", json_path, "write the ledger JSON here");

  CLI::App* venn_cmd = app.add_subcommand("venn", "placements for a list of functions");
  venn_cmd->add_option("--funcs", funcs, "comma-separated expressions")->required();
  venn_cmd->add_option("--depth", depth, "tail materialization depth");

  CLI::App* plot_cmd = app.add_subcommand("plot", "sample a function to CSV");
  plot_cmd->add_option("--f", fexpr, "function expression")->required();
  plot_cmd->add_option("--range", range, "rational bounds a:b")->required();
  plot_cmd->add_option("--samples", samples, "row count (>= 2)")->required();
  plot_cmd->add_option("--marks", marks, "interval family drawn at the zero level");
  plot_cmd->add_option("--out", out_path, "output CSV path")->required();

  app.add_subcommand("verify", "run the built-in acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitParse;
  }

  try {
    if (classify_cmd->parsed()) return run_classify(expr, depth, strict, json_path);
    if (venn_cmd->parsed()) return run_venn(funcs, depth);
    if (plot_cmd->parsed()) return run_plot(fexpr, range, samples, marks, out_path);
    if (witness_cmd->parsed()) {
      if (kind == "ac-failure") {
        auto delta = rational_arg(delta_s);
        if (!delta) {
          std::cerr << "error: --delta expects a rational a/b\n";
          return kExitParse;
        }
        return run_witness_ac_failure(*delta, count == 0 ? 10 : count, json_path);
      }
      if (kind == "set-A") return run_witness_set_a(depth, json_path);
      if (kind == "thm1") {
        auto eps = rational_arg(eps_s);
        if (!eps) {
          std::cerr << "error: --eps expects a rational a/b\n";
          return kExitParse;
        }
        if (fexpr.empty()) fexpr = "sqrt_periodic";
        return run_witness_thm1(fexpr, count == 0 ? 20 : count, *eps, json_path);
      }
      if (fexpr.empty()) fexpr = "affine(1, 0)";
      return run_witness_thm2(fexpr, depth, json_path);
    }
    return run_verify();
  } catch (const LatticeViolation& e) {
    std::cerr << "lattice violation: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
