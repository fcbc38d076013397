#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "hardy/atoms.hpp"
#include "hardy/errors.hpp"
#include "hardy/norms.hpp"
#include "hardy/piecewise.hpp"

namespace hardy {

/// Image of a function under H or H*. When the input has nonzero total
/// mass, H emits a c/x tail that never ends; the tail is materialized up
/// to `horizon` as an ordinary piece and flagged here so that norm code
/// can treat the remainder analytically.
struct OperatorImage {
  PiecewiseFunction fn;
  bool compact_support = true;   // support(fn) inside the input support hull
  bool unbounded_tail = false;   // fn continues as tail_coeff/x past horizon
  double tail_coeff = 0.0;
  double tail_start = 0.0;
  double horizon = 0.0;
};

inline constexpr double kTailHorizonFactor = 1e6;
inline constexpr double kMassDropTolerance = 1e-12;

namespace detail {

// Size of the cumulative-integral data before cancellation: term-wise
// absolute antiderivative increments. A mean-zero piece has net mass ~0
// but a scale of this order, which is what round-off is relative to.
inline double abs_increment_scale(const std::vector<Term>& anti,
                                  const Interval& span) {
  double acc = 0.0;
  for (const auto& t : anti) {
    std::vector<Term> one{t};
    acc += std::abs(eval_terms_limit(one, span.hi) -
                    eval_terms_limit(one, span.lo));
  }
  return acc;
}

}  // namespace detail

/// Averaging operator (Hf)(x) = (1/x) int_0^x f, computed per piece from
/// the closed-form antiderivative and the accumulated mass of earlier
/// pieces. Exact within the term class.
inline OperatorImage apply_hardy(const PiecewiseFunction& f,
                                 double horizon_factor = kTailHorizonFactor) {
  OperatorImage out;
  if (f.is_zero()) return out;

  std::vector<Piece> pieces;
  double carried = 0.0;     // mass accumulated before the current piece
  double mass_scale = 0.0;  // sum of |piece mass|, sets the drop tolerance
  double prev_hi = f.pieces().front().span.lo;

  for (const auto& p : f.pieces()) {
    if (p.span.lo > prev_hi && std::abs(carried) > 0.0) {
      pieces.push_back({{prev_hi, p.span.lo}, {Term{carried, -1, 0}}});
    }
    auto F = antiderivative(p.terms);
    double f_lo = detail::eval_terms_limit(F, p.span.lo);
    double f_hi = detail::eval_terms_limit(F, p.span.hi);

    std::vector<Term> ts;
    ts.push_back({carried - f_lo, -1, 0});
    for (const auto& t : F) ts.push_back({t.coeff, t.power - 1, t.log_exp});
    pieces.push_back({p.span, std::move(ts)});

    carried += f_hi - f_lo;
    mass_scale += detail::abs_increment_scale(F, p.span);
    prev_hi = p.span.hi;
  }

  double drop = kMassDropTolerance * std::max(mass_scale, 1e-300);
  if (std::abs(carried) > drop) {
    double start = prev_hi;
    double xmax = horizon_factor * prev_hi;
    pieces.push_back({{start, xmax}, {Term{carried, -1, 0}}});
    out.compact_support = false;
    out.unbounded_tail = true;
    out.tail_coeff = carried;
    out.tail_start = start;
    out.horizon = xmax;
  } else {
    // drop negligible interior 1/x pieces left over from round-off
    std::vector<Piece> kept;
    for (auto& p : pieces) {
      bool interior_dust = p.terms.size() == 1 && p.terms[0].power == -1 &&
                           p.terms[0].log_exp == 0 &&
                           std::abs(p.terms[0].coeff) <= drop;
      if (!interior_dust) kept.push_back(std::move(p));
    }
    pieces = std::move(kept);
  }
  out.fn = PiecewiseFunction::from_pieces(std::move(pieces));
  return out;
}

/// Dual operator (H*f)(x) = int_x^inf f. Zero to the right of the support
/// always; zero to the left iff the total mass vanishes (otherwise the
/// constant total mass extends down to 0).
inline OperatorImage apply_dual_hardy(const PiecewiseFunction& f) {
  OperatorImage out;
  if (f.is_zero()) return out;

  const auto& ps = f.pieces();
  std::vector<double> mass(ps.size());
  double total = 0.0, mass_scale = 0.0;
  std::vector<std::vector<Term>> antis(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    antis[i] = antiderivative(ps[i].terms);
    mass[i] = detail::eval_terms_limit(antis[i], ps[i].span.hi) -
              detail::eval_terms_limit(antis[i], ps[i].span.lo);
    total += mass[i];
    mass_scale += detail::abs_increment_scale(antis[i], ps[i].span);
  }
  double drop = kMassDropTolerance * std::max(mass_scale, 1e-300);

  std::vector<Piece> pieces;
  if (ps.front().span.lo > 0.0 && std::abs(total) > drop) {
    pieces.push_back({{0.0, ps.front().span.lo}, {Term{total, 0, 0}}});
  }
  out.compact_support = std::abs(total) <= drop;

  double right = total;  // mass from the current piece (inclusive) rightwards
  for (std::size_t i = 0; i < ps.size(); ++i) {
    double right_after = right - mass[i];
    // within the piece: H*f(x) = right_after + F(hi) - F(x)
    std::vector<Term> ts;
    ts.push_back({right_after + detail::eval_terms_limit(antis[i], ps[i].span.hi), 0, 0});
    for (const auto& t : antis[i]) ts.push_back({-t.coeff, t.power, t.log_exp});
    pieces.push_back({ps[i].span, std::move(ts)});
    // gap to the next piece carries the constant remaining mass
    if (i + 1 < ps.size() && ps[i + 1].span.lo > ps[i].span.hi &&
        std::abs(right_after) > drop) {
      pieces.push_back({{ps[i].span.hi, ps[i + 1].span.lo}, {Term{right_after, 0, 0}}});
    }
    right = right_after;
  }
  out.fn = PiecewiseFunction::from_pieces(std::move(pieces));
  return out;
}

/// lp_integral for operator images: the materialized pieces are integrated
/// as usual and the analytic remainder of an unbounded 1/x tail beyond the
/// horizon is added exactly (or rejected as divergent when p - alpha <= 1).
inline QuadResult lp_integral(const OperatorImage& img, double p,
                              const Weight& weight, double rel_tol = 1e-10) {
  QuadResult res = lp_integral(img.fn, p, weight, rel_tol);
  if (img.unbounded_tail) {
    double alpha = weight.is_unit() ? 0.0 : weight.alpha;
    double decay = p - alpha;  // integrand ~ |c|^p x^{alpha - p}
    if (decay <= 1.0) {
      throw divergence_error(
          "lp integral of the 1/x tail diverges at p = " + std::to_string(p));
    }
    res.value += std::pow(std::abs(img.tail_coeff), p) *
                 std::pow(img.horizon, 1.0 - decay) / (decay - 1.0);
  }
  return res;
}

/// Candidate produced by pushing an atom through H or H*: the scaled image
/// together with the spec it is expected to satisfy.
struct ImageCandidate {
  double scale = 1.0;
  PiecewiseFunction fn;
  AtomSpec target_spec;
};

/// (1/q') H a for a log-moment atom: expected to be a (p,q,s)-atom.
inline ImageCandidate hardy_image_atom_candidate(const Atom& a) {
  const AtomSpec& s = a.spec;
  if (!s.log_moment) {
    throw parameter_domain_error("hardy image candidate requires a log-moment atom");
  }
  if (!is_inf(s.q) && !(s.q > 1.0)) {
    throw parameter_domain_error("hardy image candidate requires q > 1");
  }
  if (!s.weight.is_unit()) {
    throw parameter_domain_error("hardy image candidate requires the unit weight");
  }
  OperatorImage img = apply_hardy(a.fn);
  if (img.unbounded_tail) {
    throw parameter_domain_error("atom mean does not vanish; H image is not compact");
  }
  ImageCandidate c;
  c.scale = 1.0 / conjugate_exponent(s.q);
  c.fn = scale(img.fn, c.scale);
  c.target_spec = s;
  c.target_spec.log_moment = false;
  return c;
}

/// Scaled H* a for a power-weighted atom with s >= 1: expected to be a
/// unit-weight (p,q,s-1)-atom. The scale depends on the q regime.
inline ImageCandidate dual_image_atom_candidate(const Atom& a) {
  const AtomSpec& s = a.spec;
  bool weighted = !s.weight.is_unit() && s.weight.alpha == s.p;
  if (!weighted) {
    throw parameter_domain_error("dual image candidate requires the x^p weight");
  }
  if (s.s < 1) {
    throw parameter_domain_error("dual image candidate requires s >= 1");
  }
  double factor;
  if (is_inf(s.q)) {
    factor = std::pow(1.0 + s.p, -1.0 / s.p);
  } else if (s.q == 1.0) {
    if (s.p == 1.0) {
      throw parameter_domain_error("dual image candidate excludes q = 1, p = 1");
    }
    factor = (1.0 - s.p) * std::pow(1.0 + s.p, 1.0 - 1.0 / s.p);
  } else {
    factor = 1.0 / s.q;
  }
  OperatorImage img = apply_dual_hardy(a.fn);
  if (!img.compact_support) {
    throw parameter_domain_error("atom mean does not vanish; H* image spills left");
  }
  ImageCandidate c;
  c.scale = factor;
  c.fn = scale(img.fn, factor);
  c.target_spec = s;
  c.target_spec.s = s.s - 1;
  c.target_spec.weight = Weight::unit();
  c.target_spec.log_moment = false;
  return c;
}

}  // namespace hardy
