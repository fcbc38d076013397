#pragma once

#include <cmath>

#include "hardy/errors.hpp"
#include "hardy/norms.hpp"

namespace hardy {
namespace constants {

inline constexpr double kLn2 = 0.6931471805599453;

/// Sum-level constant (1 - p/q)^{-1/p}; p/q = 0 at q = inf.
inline double c1(double p, double q) {
  double pq = is_inf(q) ? 0.0 : p / q;
  return std::pow(1.0 - pq, -1.0 / p);
}

/// Atom-level constant 1/(1 - p/q), the p-th power of c1.
inline double c1_pow(double p, double q) {
  double pq = is_inf(q) ? 0.0 : p / q;
  return 1.0 / (1.0 - pq);
}

/// Admissibility of the dual-operator bounds: q = inf, or q = 1 with
/// p < 1, or 1 < q < inf with p < q - 1.
inline bool dual_domain_ok(double p, double q) {
  if (is_inf(q)) return true;
  if (q == 1.0) return p < 1.0;
  return q > 1.0 && p < q - 1.0;
}

inline void require_dual_domain(double p, double q, const char* who) {
  if (!dual_domain_ok(p, q)) {
    throw parameter_domain_error(
        std::string(who) +
        " requires q = inf, or q = 1 with p < 1, or 1 < q < inf with p < q - 1");
  }
}

/// Atom-level dual constant (three q regimes). In the 1 < q < inf case the
/// size-budget substitution gives (int t^p)^{p/q-1}, so the (1+p) factor
/// enters with exponent 1 - p/q; near-extremal atoms on (r, 1), r -> 0,
/// exceed the variant with the opposite sign, so that sign matters.
inline double c2_pow(double p, double q) {
  require_dual_domain(p, q, "c2_pow");
  if (is_inf(q)) return 1.0;
  if (q == 1.0) return 1.0 / ((1.0 - p) * std::pow(1.0 + p, p));
  double qc = conjugate_exponent(q);
  return std::pow(1.0 - p * qc / q, -p / qc) * std::pow(1.0 + p, 1.0 - p / q) /
         ((1.0 / qc - p / q) * p + 1.0);
}

/// Sum-level dual constant; its p-th power equals c2_pow.
inline double c2(double p, double q) {
  require_dual_domain(p, q, "c2");
  if (is_inf(q)) return 1.0;
  if (q == 1.0) return std::pow(1.0 - p, -1.0 / p) / (1.0 + p);
  double qc = conjugate_exponent(q);
  return std::pow(1.0 - p * qc / q, -1.0 / qc) *
         std::pow(1.0 + p, 1.0 / p - 1.0 / q) /
         std::pow((1.0 / qc - p / q) * p + 1.0, 1.0 / p);
}

/// Scale applied to H a so the image is again an atom: 1/q'.
inline double hardy_image_scale(double q) { return 1.0 / conjugate_exponent(q); }

/// Scale applied to H* a so the image is a (p,q,s-1)-atom.
inline double dual_image_scale(double p, double q) {
  if (is_inf(q)) return std::pow(1.0 + p, -1.0 / p);
  if (q == 1.0) {
    if (p == 1.0) throw parameter_domain_error("dual image scale excludes q=1, p=1");
    return (1.0 - p) * std::pow(1.0 + p, 1.0 - 1.0 / p);
  }
  return 1.0 / q;
}

/// Classical averaging constant p'^p, evaluated as |p/(p-1)|^p. For
/// 0 < p < 1 the conjugate is negative; the absolute value is the
/// real-valued reading and checks flag it in their metadata.
inline double classical_hardy_constant(double p) {
  if (p == 1.0) throw parameter_domain_error("classical constant needs p != 1");
  return std::pow(std::abs(p / (p - 1.0)), p);
}

/// Classical dual constant p^p.
inline double classical_dual_constant(double p) { return std::pow(p, p); }

}  // namespace constants
}  // namespace hardy
