#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

namespace hardy {

enum class Verdict { PASS, FAIL, INCONCLUSIVE };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::PASS:
      return "PASS";
    case Verdict::FAIL:
      return "FAIL";
    default:
      return "INCONCLUSIVE";
  }
}

/// One inequality check. In strict mode a PASS certifies lhs < bound with
/// the quadrature error subtracted and additionally requires the error to
/// be under 1% of the margin; anything between definite outcomes is
/// INCONCLUSIVE rather than guessed.
struct BoundReport {
  std::string check_id;
  double lhs = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  bool strict = false;
  double quad_error = 0.0;
  Verdict verdict = Verdict::INCONCLUSIVE;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
};

inline Verdict judge_bound(double lhs, double bound, bool strict,
                           double quad_error) {
  if (strict) {
    double margin = bound - lhs;
    if (lhs < bound - quad_error && quad_error <= 0.01 * margin) {
      return Verdict::PASS;
    }
    if (lhs > bound + quad_error) return Verdict::FAIL;
    return Verdict::INCONCLUSIVE;
  }
  return lhs <= bound + quad_error ? Verdict::PASS : Verdict::FAIL;
}

inline BoundReport make_bound_report(std::string check_id, double lhs,
                                     double bound, bool strict,
                                     double quad_error) {
  BoundReport r;
  r.check_id = std::move(check_id);
  r.lhs = lhs;
  r.bound = bound;
  r.ratio = bound != 0.0 ? lhs / bound : std::numeric_limits<double>::infinity();
  r.strict = strict;
  r.quad_error = quad_error;
  r.verdict = judge_bound(lhs, bound, strict, quad_error);
  return r;
}

/// Process exit code for a batch of verdicts: 0 when everything passed,
/// 2 on any failure, 3 when the only blemishes are inconclusive checks.
inline int exit_code_for(const std::vector<Verdict>& verdicts) {
  bool any_fail = false, any_inconclusive = false;
  for (Verdict v : verdicts) {
    if (v == Verdict::FAIL) any_fail = true;
    if (v == Verdict::INCONCLUSIVE) any_inconclusive = true;
  }
  if (any_fail) return 2;
  if (any_inconclusive) return 3;
  return 0;
}

namespace detail {

/// Deterministic short float formatting for ids and summaries.
inline std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// Deterministic full-precision formatting for data files.
inline std::string fmt_full(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_q(double q) {
  return std::isinf(q) ? std::string("inf") : fmt_g(q);
}

}  // namespace detail

}  // namespace hardy
