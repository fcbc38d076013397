#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "hardy/errors.hpp"
#include "hardy/piecewise.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/weight.hpp"

namespace hardy {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline bool is_inf(double q) { return std::isinf(q); }

/// Conjugate exponent q' = q/(q-1) with the conventions inf' = 1, 1' = inf.
inline double conjugate_exponent(double q) {
  if (is_inf(q)) return 1.0;
  if (q == 1.0) return kInfinity;
  return q / (q - 1.0);
}

namespace detail {

inline std::vector<Term> derivative_terms(const std::vector<Term>& ts) {
  // d/dx [c x^k (ln x)^m] = c k x^{k-1} (ln x)^m + c m x^{k-1} (ln x)^{m-1}.
  // Used only for numeric evaluation; powers may drop below the Term cap.
  std::vector<Term> out;
  for (const auto& t : ts) {
    if (t.power != 0) out.push_back({t.coeff * t.power, t.power - 1, t.log_exp});
    if (t.log_exp > 0) out.push_back({t.coeff * t.log_exp, t.power - 1, t.log_exp - 1});
  }
  return combine_terms(std::move(out));
}

/// Critical points of a term sum inside (lo, hi): sign changes of the
/// derivative, bracketed by a dense scan and refined by bisection.
inline std::vector<double> critical_points(const std::vector<Term>& ts,
                                           double lo, double hi,
                                           int samples = 2048) {
  std::vector<double> pts;
  auto d = derivative_terms(ts);
  if (d.empty()) return pts;
  double a = lo + (hi - lo) * 1e-12;
  double b = hi - (hi - lo) * 1e-12;
  double h = (b - a) / samples;
  double xa = a, fa = eval_terms(d, xa);
  for (int i = 1; i <= samples; ++i) {
    double xb = a + i * h;
    double fb = eval_terms(d, xb);
    if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
      double u = xa, v = xb, fu = fa;
      for (int it = 0; it < 90 && v - u > 0.0; ++it) {
        double m = 0.5 * (u + v);
        if (m <= u || m >= v) break;
        double fm = eval_terms(d, m);
        if ((fu < 0.0 && fm > 0.0) || (fu > 0.0 && fm < 0.0)) {
          v = m;
        } else {
          u = m;
          fu = fm;
        }
      }
      pts.push_back(0.5 * (u + v));
    } else if (fa == 0.0) {
      pts.push_back(xa);
    }
    xa = xb;
    fa = fb;
  }
  return pts;
}

}  // namespace detail

/// Essential supremum of |f| via derivative-root enumeration per piece
/// (endpoints plus interior critical points). Returns +inf when a piece
/// diverges at a zero left endpoint.
inline double sup_norm(const PiecewiseFunction& f) {
  double best = 0.0;
  for (const auto& p : f.pieces()) {
    // endpoint values (limit at 0)
    try {
      best = std::max(best, std::abs(detail::eval_terms_limit(p.terms, p.span.lo)));
    } catch (const divergence_error&) {
      return kInfinity;
    }
    best = std::max(best, std::abs(detail::eval_terms(p.terms, p.span.hi)));
    for (double x : detail::critical_points(p.terms, p.span.lo, p.span.hi)) {
      best = std::max(best, std::abs(detail::eval_terms(p.terms, x)));
    }
  }
  return best;
}

namespace detail {

template <typename F>
QuadResult integrate_segment(const F& g, double a, double b, double rel_tol,
                             double abs_floor) {
  if (a == 0.0) return adaptive_integrate_zero_left(g, b, rel_tol, abs_floor);
  return adaptive_integrate(g, a, b, rel_tol, abs_floor);
}

}  // namespace detail

/// int |f|^p w dx over the support of f.
///
/// The domain is split at piece boundaries and sign changes of f, so
/// |f|^p is smooth inside every segment; each segment is integrated by
/// adaptive Gauss-Kronrod (with an x = t^2 substitution when the segment
/// touches 0). The returned error estimate is the sum of the per-segment
/// estimates.
inline QuadResult lp_integral(const PiecewiseFunction& f, double p,
                              const Weight& weight, double rel_tol = 1e-10) {
  if (!(p > 0.0)) throw parameter_domain_error("lp_integral requires p > 0");
  if (!(rel_tol > 1e-13) || !(rel_tol < 1e-2)) {
    throw parameter_domain_error("lp_integral requires rel_tol in (1e-13, 1e-2)");
  }
  QuadResult total;
  if (f.is_zero()) return total;

  double floor_share =
      1e-14 / static_cast<double>(std::max<std::size_t>(2 * f.pieces().size(), 1));

  for (const auto& piece : f.pieces()) {
    std::vector<double> cuts{piece.span.lo};
    auto one = PiecewiseFunction::single(piece.span, piece.terms);
    double tol_loc = 1e-11 * piece.span.width();
    for (double r : sign_change_points(one, tol_loc)) cuts.push_back(r);
    cuts.push_back(piece.span.hi);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const auto& terms = piece.terms;
      auto g = [&terms, p, &weight](double x) {
        double v = std::abs(detail::eval_terms(terms, x));
        return std::pow(v, p) * weight(x);
      };
      total += detail::integrate_segment(g, cuts[i], cuts[i + 1], 0.5 * rel_tol,
                                         floor_share);
    }
  }
  return total;
}

/// Weighted L^q norm. For finite q this is lp_integral(...)^{1/q}; for
/// q = inf it is the exact supremum (the weight plays no role there).
/// The error estimate is propagated through the q-th root.
inline QuadResult lq_norm_result(const PiecewiseFunction& f, double q,
                                 const Weight& weight, double rel_tol = 1e-10) {
  if (is_inf(q)) {
    double v = sup_norm(f);
    return {v, 4.0 * std::numeric_limits<double>::epsilon() * v, 0};
  }
  if (!(q >= 1.0)) throw parameter_domain_error("lq_norm requires q >= 1");
  QuadResult raw = lp_integral(f, q, weight, rel_tol);
  QuadResult out;
  out.subdivisions = raw.subdivisions;
  if (raw.value <= 0.0) {
    out.value = 0.0;
    out.abs_error_estimate = std::pow(raw.abs_error_estimate, 1.0 / q);
    return out;
  }
  out.value = std::pow(raw.value, 1.0 / q);
  out.abs_error_estimate =
      out.value / q * (raw.abs_error_estimate / raw.value);
  return out;
}

inline double lq_norm(const PiecewiseFunction& f, double q, const Weight& weight,
                      double rel_tol = 1e-10) {
  return lq_norm_result(f, q, weight, rel_tol).value;
}

/// The two elementary inequalities used throughout the bound proofs:
///   (x1-x0)^{p+1} <  x1^{p+1} - x0^{p+1}          (p > 0)
///   (x1-x0)^{1-p} >  x1^{1-p} - x0^{1-p}          (0 < p < 1)
struct AuxiliaryCheck {
  double lhs10 = 0.0, rhs10 = 0.0;
  double lhs11 = std::numeric_limits<double>::quiet_NaN();
  double rhs11 = std::numeric_limits<double>::quiet_NaN();
  bool pass = false;
};

inline AuxiliaryCheck auxiliary_inequality_check(double x0, double x1, double p) {
  if (!(0.0 < x0 && x0 < x1)) {
    throw parameter_domain_error("auxiliary check requires 0 < x0 < x1");
  }
  if (!(p > 0.0)) throw parameter_domain_error("auxiliary check requires p > 0");
  AuxiliaryCheck r;
  r.lhs10 = std::pow(x1 - x0, p + 1.0);
  r.rhs10 = std::pow(x1, p + 1.0) - std::pow(x0, p + 1.0);
  r.pass = r.lhs10 < r.rhs10;
  if (p < 1.0) {
    r.lhs11 = std::pow(x1 - x0, 1.0 - p);
    r.rhs11 = std::pow(x1, 1.0 - p) - std::pow(x0, 1.0 - p);
    r.pass = r.pass && (r.lhs11 > r.rhs11);
  }
  return r;
}

}  // namespace hardy
