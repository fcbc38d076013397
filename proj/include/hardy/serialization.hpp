#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hardy/atoms.hpp"
#include "hardy/extremal.hpp"
#include "hardy/piecewise.hpp"
#include "hardy/report.hpp"

namespace hardy {

using json = nlohmann::ordered_json;

// -- piecewise functions ----------------------------------------------------

inline json to_json(const PiecewiseFunction& f) {
  json pieces = json::array();
  for (const auto& p : f.pieces()) {
    json terms = json::array();
    for (const auto& t : p.terms) {
      terms.push_back({{"coeff", t.coeff}, {"power", t.power}, {"log_exp", t.log_exp}});
    }
    pieces.push_back({{"lo", p.span.lo}, {"hi", p.span.hi}, {"terms", terms}});
  }
  return json{{"pieces", pieces}};
}

inline PiecewiseFunction piecewise_from_json(const json& j) {
  std::vector<Piece> pieces;
  for (const auto& pj : j.at("pieces")) {
    Piece p;
    p.span = {pj.at("lo").get<double>(), pj.at("hi").get<double>()};
    for (const auto& tj : pj.at("terms")) {
      p.terms.push_back({tj.at("coeff").get<double>(), tj.at("power").get<int>(),
                         tj.at("log_exp").get<int>()});
    }
    pieces.push_back(std::move(p));
  }
  return PiecewiseFunction::from_pieces(std::move(pieces));
}

// -- atoms --------------------------------------------------------------------

inline json to_json(const AtomSpec& s) {
  json j;
  j["p"] = s.p;
  if (is_inf(s.q)) {
    j["q"] = "inf";
  } else {
    j["q"] = s.q;
  }
  j["s"] = s.s;
  j["weight"] = {{"kind", s.weight.is_unit() ? "unit" : "power"},
                 {"alpha", s.weight.is_unit() ? 0.0 : s.weight.alpha}};
  j["x0"] = s.interval.lo;
  j["x1"] = s.interval.hi;
  j["log_moment"] = s.log_moment;
  j["allow_zero_left"] = s.allow_zero_left;
  return j;
}

inline double q_from_json(const json& v) {
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return kInfinity;
    throw parameter_domain_error("q must be a number or \"inf\"");
  }
  return v.get<double>();
}

inline AtomSpec atom_spec_from_json(const json& j) {
  AtomSpec s;
  s.p = j.at("p").get<double>();
  s.q = q_from_json(j.at("q"));
  s.s = j.at("s").get<int>();
  const auto& w = j.at("weight");
  s.weight = w.at("kind").get<std::string>() == "unit"
                 ? Weight::unit()
                 : Weight::power(w.at("alpha").get<double>());
  s.interval = {j.at("x0").get<double>(), j.at("x1").get<double>()};
  s.log_moment = j.value("log_moment", false);
  s.allow_zero_left = j.value("allow_zero_left", false);
  s.validate();
  return s;
}

inline json to_json(const Atom& a) {
  return json{{"spec", to_json(a.spec)},
              {"fn", to_json(a.fn)},
              {"norm_budget", a.norm_budget}};
}

inline Atom atom_from_json(const json& j) {
  Atom a;
  a.spec = atom_spec_from_json(j.at("spec"));
  a.fn = piecewise_from_json(j.at("fn"));
  a.norm_budget = j.at("norm_budget").get<double>();
  return a;
}

inline json to_json(const AtomicSum& sum) {
  json entries = json::array();
  for (const auto& [lambda, atom] : sum.entries) {
    entries.push_back({{"lambda", lambda}, {"atom", to_json(atom)}});
  }
  return json{{"p", sum.p}, {"entries", entries}};
}

inline AtomicSum atomic_sum_from_json(const json& j) {
  std::vector<std::pair<double, Atom>> entries;
  for (const auto& e : j.at("entries")) {
    entries.emplace_back(e.at("lambda").get<double>(), atom_from_json(e.at("atom")));
  }
  AtomicSum sum = make_atomic_sum(std::move(entries));
  if (sum.p != j.at("p").get<double>()) {
    throw parameter_domain_error("atomic sum p disagrees with its atoms");
  }
  return sum;
}

// -- reports ------------------------------------------------------------------

inline json to_json(const BoundReport& r) {
  json j;
  j["check_id"] = r.check_id;
  j["lhs"] = r.lhs;
  j["bound"] = r.bound;
  j["ratio"] = r.ratio;
  j["strict"] = r.strict;
  j["quad_error"] = r.quad_error;
  j["verdict"] = to_string(r.verdict);
  j["metadata"] = r.metadata;
  return j;
}

inline json to_json(const AtomValidationReport& r) {
  json j;
  j["passed"] = r.passed();
  j["support_ok"] = r.support_ok;
  j["size_ok"] = r.size_ok;
  j["size_strict_ok"] = r.size_strict_ok;
  j["moments_ok"] = r.moments_ok;
  j["log_moment_ok"] = r.log_moment_ok;
  j["strict_size_required"] = r.strict_size_required;
  j["trivial"] = r.trivial;
  j["norm_measured"] = r.norm_measured;
  j["norm_error"] = r.norm_error;
  j["norm_budget"] = r.norm_budget;
  j["scale"] = r.scale;
  j["tol"] = r.tol;
  j["moments"] = r.moments;
  if (!std::isnan(r.log_moment_value)) j["log_moment"] = r.log_moment_value;
  return j;
}

// -- CSV ----------------------------------------------------------------------

inline std::string csv_quote(const std::string& s) {
  bool needs = s.find_first_of(",\"\n") != std::string::npos;
  if (!needs) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline const char* kReportCsvHeader =
    "check_id,p,q,s,x0,x1,seed,lhs,bound,ratio,strict,quad_error,verdict";

/// Key columns identifying a report row; fields not meaningful for a
/// command are left empty in the CSV.
struct ReportKey {
  std::optional<double> p, q;
  std::optional<int> s;
  std::optional<double> x0, x1;
  std::optional<std::uint64_t> seed;
};

/// Flat CSV row for a report; the key columns come from the caller so that
/// sweep files sort on them without re-parsing metadata.
inline std::string report_csv_row(const BoundReport& r, const ReportKey& k) {
  using detail::fmt_full;
  auto num = [](const std::optional<double>& v) {
    if (!v) return std::string();
    return is_inf(*v) ? std::string("inf") : fmt_full(*v);
  };
  std::string row = csv_quote(r.check_id);
  row += "," + num(k.p);
  row += "," + num(k.q);
  row += "," + (k.s ? std::to_string(*k.s) : std::string());
  row += "," + num(k.x0);
  row += "," + num(k.x1);
  row += "," + (k.seed ? std::to_string(*k.seed) : std::string());
  row += "," + fmt_full(r.lhs);
  row += "," + fmt_full(r.bound);
  row += "," + fmt_full(r.ratio);
  row += std::string(",") + (r.strict ? "true" : "false");
  row += "," + fmt_full(r.quad_error);
  row += std::string(",") + to_string(r.verdict);
  return row;
}

inline const char* kTightnessCsvHeader =
    "p,q,s,r,tightness,best_value,bound,seed,iters,status";

inline std::string tightness_csv_row(const TightnessRow& row) {
  using detail::fmt_full;
  std::string out = fmt_full(row.p);
  out += "," + (is_inf(row.q) ? std::string("inf") : fmt_full(row.q));
  out += "," + std::to_string(row.s);
  if (row.skipped) {
    out += ",,,,";
  } else {
    out += "," + fmt_full(row.r);
    out += "," + fmt_full(row.tightness);
    out += "," + fmt_full(row.best_value);
    out += "," + fmt_full(row.bound);
  }
  out += "," + std::to_string(row.seed);
  out += "," + std::to_string(row.iters);
  out += std::string(",") + (row.skipped ? csv_quote("skip:" + row.reason) : "ok");
  return out;
}

}  // namespace hardy
