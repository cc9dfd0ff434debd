#include "funcspace/report.hpp"

#include <variant>

namespace funcspace {
inline namespace dsl {

namespace {

std::string rat(const Rational& r) { return to_string(r); }

}  // namespace

Json json_of(const Enclosure& e) {
  Json j;
  j["lo"] = rat(e.lo);
  j["hi"] = rat(e.hi);
  j["exact"] = e.exact;
  return j;
}

Json json_of(const ExtendedValue& v) {
  Json j;
  if (v.is_finite()) {
    j["state"] = "finite";
    j["enclosure"] = json_of(v.enclosure());
  } else if (v.is_infinite()) {
    j["state"] = "infinite";
    j["certificate"] = json_of(v.certificate());
  } else {
    j["state"] = "unknown";
    j["reason"] = v.reason();
  }
  return j;
}

Json json_of(const DivergenceCertificate& c) {
  Json j;
  j["dominating_term"] = to_string(c.term);
  j["from_index"] = c.from_index;
  Json prefix = Json::array();
  for (const auto& [n, partial] : c.checked_prefix) prefix.push_back({n, rat(partial)});
  j["checked_prefix"] = std::move(prefix);
  j["note"] = c.note;
  return j;
}

Json json_of(const classifier::Certificate& c) {
  Json j;
  std::visit(
      [&](const auto& cert) {
        using T = std::decay_t<decltype(cert)>;
        if constexpr (std::is_same_v<T, BoundCert>) {
          j["kind"] = "bound";
          j["quantity"] = cert.quantity;
          j["value"] = json_of(cert.value);
        } else if constexpr (std::is_same_v<T, ThresholdCert>) {
          j["kind"] = "threshold";
          j["threshold"] = rat(cert.threshold);
          j["superlevel_set"] = cert.superlevel_set.to_text();
          j["measure"] = json_of(cert.measure);
          j["tail_integral"] = json_of(cert.tail_integral);
        } else if constexpr (std::is_same_v<T, DivergentFamilyCert>) {
          j["kind"] = "divergent-family";
          j["family"] = cert.family.to_text();
          Json ledger = Json::array();
          for (const auto& [n, partial] : cert.ledger) ledger.push_back({n, rat(partial)});
          j["ledger"] = std::move(ledger);
          j["divergence"] = json_of(cert.divergence);
        } else if constexpr (std::is_same_v<T, AttributeCert>) {
          j["kind"] = "attribute";
          j["justification"] = cert.justification;
        } else {
          j["kind"] = "implication";
          j["from"] = to_string(cert.from);
          j["direction"] = cert.direction;
        }
      },
      c);
  return j;
}

Json json_of(const Verdict& v) {
  Json j;
  j["space"] = to_string(v.space);
  j["status"] = to_string(v.status);
  j["reason"] = v.reason;
  if (v.certificate) j["certificate"] = json_of(*v.certificate);
  return j;
}

Json json_of(const VennPlacement& p) {
  Json j;
  Json verdicts = Json::array();
  for (const Verdict& v : p.verdicts) verdicts.push_back(json_of(v));
  j["verdicts"] = std::move(verdicts);
  j["placement"] = placement_line(p);
  return j;
}

std::string placement_line(const VennPlacement& p) {
  std::string in, out, unknown;
  auto add = [](std::string& bucket, SpaceId s) {
    if (!bucket.empty()) bucket += ", ";
    bucket += to_string(s);
  };
  for (const Verdict& v : p.verdicts) {
    if (v.status == Status::In) add(in, v.space);
    else if (v.status == Status::Out) add(out, v.space);
    else add(unknown, v.space);
  }
  std::string line = "In: " + (in.empty() ? "-" : in) + " | Out: " + (out.empty() ? "-" : out);
  if (!unknown.empty()) line += " | Unknown: " + unknown;
  return line;
}

Json json_of(const ACFailureWitness& w) {
  Json j;
  j["delta"] = rat(w.delta);
  Json pairs = Json::array();
  for (const auto& [a, b] : w.pairs) pairs.push_back({rat(a), rat(b)});
  j["pairs"] = std::move(pairs);
  j["length_sum"] = json_of(w.length_sum);
  j["variation_sum"] = json_of(w.variation_sum);
  j["epsilon_claim"] = rat(w.epsilon_claim);
  return j;
}

Json json_of(const SetACertificate& c) {
  Json j;
  j["family"] = c.family.to_text();
  j["measure"] = json_of(c.set_measure);
  Json integral;
  integral["value"] = json_of(c.derivative_integral.value);
  Json ledger = Json::array();
  for (const auto& [n, partial] : c.derivative_integral.ledger)
    ledger.push_back({n, rat(partial)});
  integral["ledger"] = std::move(ledger);
  j["derivative_integral"] = std::move(integral);
  j["conclusion"] = c.conclusion;
  return j;
}

Json json_of(const AdversaryLedger& led) {
  Json j;
  j["function"] = to_text(led.f);
  j["epsilon"] = rat(led.epsilon);
  j["delta"] = rat(led.delta);
  j["measure_budget"] = to_string(led.budget);
  Json fams = Json::array();
  for (std::size_t i = 0; i < led.families.size(); ++i) {
    Json fam;
    fam["n"] = i + 1;
    fam["family"] = led.families[i].to_text();
    fam["start_index"] = led.start_index[i];
    fam["intervals"] = led.count[i];
    fam["integral_lower_bound"] = rat(led.per_family_lower_bounds[i]);
    fam["required_bound"] = rat(led.proof_shape_bounds[i]);
    fam["m_value"] = rat(led.m_values[i]);
    fam["cutoff"] = rat(led.cutoffs[i]);
    fams.push_back(std::move(fam));
  }
  j["families"] = std::move(fams);
  j["union_measure"] = json_of(led.union_measure);
  j["union_divergence"] = json_of(led.union_divergence);
  return j;
}

Json json_of(const Theorem2Ledger& led) {
  Json j;
  j["function"] = to_text(led.f);
  Json rows = Json::array();
  for (std::size_t i = 0; i < led.pieces.size(); ++i) {
    Json row;
    row["n"] = i + 1;
    row["superlevel_set"] = led.superlevels[i].to_text();
    row["piece"] = led.pieces[i].to_text();
    row["measure"] = json_of(led.measures[i]);
    row["integral_lower_bound"] = rat(led.integral_lower_bounds[i]);
    row["window_index"] = led.window_indices[i].str();
    rows.push_back(std::move(row));
  }
  j["levels"] = std::move(rows);
  return j;
}

Json json_of(const VerificationReport& rep) {
  Json j;
  j["checks"] = rep.checks;
  j["summary"] = rep.summary;
  return j;
}

namespace {

Json parameters_json(const classifier::Options& opts) {
  Json j;
  j["depth"] = opts.depth;
  j["threshold_doublings"] = opts.kmax;
  j["root_tol"] = to_string(opts.refine.root_tol);
  j["riemann_target"] = to_string(opts.refine.riemann_target);
  j["riemann_cap"] = opts.refine.riemann_cap;
  j["max_splits"] = opts.refine.max_splits;
  return j;
}

}  // namespace

Json classify_report(const FuncPtr& f, const classifier::Options& opts) {
  Json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["function"] = to_text(f);
  j["parameters"] = parameters_json(opts);
  VennPlacement p = classify(f, opts);
  Json verdicts = Json::array();
  for (const Verdict& v : p.verdicts) verdicts.push_back(json_of(v));
  j["verdicts"] = std::move(verdicts);
  j["placement"] = placement_line(p);
  return j;
}

Result<std::string> plot_csv(const FuncPtr& f, const Rational& lo, const Rational& hi,
                             unsigned long samples, const IntervalFamily* marks) {
  using R = Result<std::string>;
  if (!(lo < hi)) return R::fail("invalid range: lo must be below hi");
  if (samples < 2) return R::fail("invalid range: need at least 2 samples");

  std::string csv = "series,x,y\n";
  const Rational step((hi - lo) / (samples - 1));
  for (unsigned long i = 0; i < samples; ++i) {
    Rational x(lo + Rational(step * i));
    auto y = evaluate(f, x);
    if (!y) continue;  // undefined point: skip the row
    csv += "f," + decimal_string(x, 9) + "," + decimal_string(y->midpoint(), 9) + "\n";
  }
  if (marks) {
    auto band = [&](const Interval& iv) {
      if (iv.right < lo || iv.left > hi) return;
      csv += "mark," + decimal_string(iv.left, 9) + ",0\n";
      csv += "mark," + decimal_string(iv.right, 9) + ",0\n";
    };
    for (const Interval& iv : marks->head()) band(iv);
    if (marks->tail()) {
      const TailDescriptor& t = *marks->tail();
      for (unsigned long n = t.from_index;; ++n) {
        Interval iv = t.interval_at(n);
        if (iv.left > hi) break;
        band(iv);
        if (t.mirrored) band(t.mirrored_interval_at(n));
        if (n > t.from_index + 100000) break;
      }
    }
  }
  return R::ok(std::move(csv));
}

}  // namespace dsl
}  // namespace funcspace
