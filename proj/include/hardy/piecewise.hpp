#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hardy/errors.hpp"

namespace hardy {

/// One term c * x^k * (ln x)^m of a generalized piecewise function.
///
/// The class of finite sums of such terms on disjoint intervals is closed
/// under addition, scaling, the averaging operator, its dual, and
/// antidifferentiation (up to log exponent 2), which is exactly what the
/// atom constructions need.
struct Term {
  double coeff = 0.0;
  int power = 0;    // exponent of x, >= -2
  int log_exp = 0;  // exponent of ln x, in {0, 1, 2}
};

inline constexpr int kMinPower = -2;
inline constexpr int kMaxLogExp = 2;

/// Half-open interval [lo, hi) on the positive half-line; lo may be 0.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x < hi; }
};

inline void check_interval(const Interval& iv) {
  if (!(iv.lo >= 0.0) || !(iv.hi > iv.lo) || !std::isfinite(iv.hi)) {
    throw parameter_domain_error("interval requires 0 <= lo < hi < inf");
  }
}

struct Piece {
  Interval span;
  std::vector<Term> terms;
};

namespace detail {

inline double int_pow(double x, int k) {
  if (k == 0) return 1.0;
  bool neg = k < 0;
  unsigned n = static_cast<unsigned>(neg ? -k : k);
  double base = x, acc = 1.0;
  while (n) {
    if (n & 1u) acc *= base;
    base *= base;
    n >>= 1;
  }
  return neg ? 1.0 / acc : acc;
}

inline double eval_term(const Term& t, double x) {
  double v = t.coeff * int_pow(x, t.power);
  if (t.log_exp > 0) {
    double lx = std::log(x);
    v *= (t.log_exp == 1) ? lx : lx * lx;
  }
  return v;
}

inline double eval_terms(const std::vector<Term>& ts, double x) {
  double s = 0.0;
  for (const auto& t : ts) s += eval_term(t, x);
  return s;
}

/// Evaluate a term sum at x, taking the limit x -> 0+ when x == 0.
/// Throws divergence_error if the limit is infinite.
inline double eval_terms_limit(const std::vector<Term>& ts, double x) {
  if (x > 0.0) return eval_terms(ts, x);
  double s = 0.0;
  for (const auto& t : ts) {
    if (t.coeff == 0.0) continue;
    if (t.power > 0) continue;  // x^k (ln x)^m -> 0 for k > 0
    if (t.power == 0 && t.log_exp == 0) {
      s += t.coeff;
      continue;
    }
    throw divergence_error("term sum diverges at x = 0");
  }
  return s;
}

/// Merge terms with identical (power, log_exp); drop exact zeros.
inline std::vector<Term> combine_terms(std::vector<Term> ts) {
  std::sort(ts.begin(), ts.end(), [](const Term& a, const Term& b) {
    return a.power != b.power ? a.power < b.power : a.log_exp < b.log_exp;
  });
  std::vector<Term> out;
  for (const auto& t : ts) {
    if (!out.empty() && out.back().power == t.power &&
        out.back().log_exp == t.log_exp) {
      out.back().coeff += t.coeff;
    } else {
      out.push_back(t);
    }
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const Term& t) { return t.coeff == 0.0; }),
            out.end());
  return out;
}

}  // namespace detail

/// Term-by-term closed-form antiderivative.
///
///   int x^k dx        = x^{k+1}/(k+1)                       (k != -1)
///   int x^-1 dx       = ln x
///   int x^k ln x dx   = x^{k+1} (ln x/(k+1) - 1/(k+1)^2)    (k != -1)
///   int x^-1 ln x dx  = (ln x)^2 / 2
///   int x^k (ln x)^2  = x^{k+1} ((ln x)^2/(k+1) - 2 ln x/(k+1)^2
///                                 + 2/(k+1)^3)              (k != -1)
///
/// int x^-1 (ln x)^2 dx = (ln x)^3/3 leaves the term class and is rejected.
inline std::vector<Term> antiderivative(const std::vector<Term>& terms) {
  std::vector<Term> out;
  for (const auto& t : terms) {
    if (t.coeff == 0.0) continue;
    if (t.power == -1) {
      switch (t.log_exp) {
        case 0:
          out.push_back({t.coeff, 0, 1});
          break;
        case 1:
          out.push_back({t.coeff / 2.0, 0, 2});
          break;
        default:
          throw unsupported_term_error(
              "antiderivative of x^-1 (ln x)^2 needs log exponent 3");
      }
      continue;
    }
    double r = 1.0 / (t.power + 1);
    switch (t.log_exp) {
      case 0:
        out.push_back({t.coeff * r, t.power + 1, 0});
        break;
      case 1:
        out.push_back({t.coeff * r, t.power + 1, 1});
        out.push_back({-t.coeff * r * r, t.power + 1, 0});
        break;
      default:
        out.push_back({t.coeff * r, t.power + 1, 2});
        out.push_back({-2.0 * t.coeff * r * r, t.power + 1, 1});
        out.push_back({2.0 * t.coeff * r * r * r, t.power + 1, 0});
        break;
    }
  }
  return detail::combine_terms(std::move(out));
}

/// Finite sum of power-log terms on disjoint half-open intervals,
/// zero elsewhere. Immutable after construction; all operations are pure.
class PiecewiseFunction {
 public:
  PiecewiseFunction() = default;

  static PiecewiseFunction from_pieces(std::vector<Piece> pieces) {
    for (auto& p : pieces) {
      check_interval(p.span);
      for (const auto& t : p.terms) {
        if (!std::isfinite(t.coeff)) {
          throw parameter_domain_error("term coefficient must be finite");
        }
        if (t.power < kMinPower) {
          throw parameter_domain_error("term power below " +
                                       std::to_string(kMinPower));
        }
        if (t.log_exp < 0 || t.log_exp > kMaxLogExp) {
          throw parameter_domain_error("log exponent outside {0,1,2}");
        }
      }
      p.terms = detail::combine_terms(std::move(p.terms));
    }
    pieces.erase(std::remove_if(pieces.begin(), pieces.end(),
                                [](const Piece& p) { return p.terms.empty(); }),
                 pieces.end());
    std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
      return a.span.lo < b.span.lo;
    });
    for (std::size_t i = 1; i < pieces.size(); ++i) {
      if (pieces[i].span.lo < pieces[i - 1].span.hi - 0.0) {
        throw parameter_domain_error("pieces overlap");
      }
    }
    PiecewiseFunction f;
    f.pieces_ = std::move(pieces);
    return f;
  }

  /// Single piece convenience constructor.
  static PiecewiseFunction single(Interval span, std::vector<Term> terms) {
    return from_pieces({Piece{span, std::move(terms)}});
  }

  static PiecewiseFunction zero() { return PiecewiseFunction(); }

  const std::vector<Piece>& pieces() const { return pieces_; }
  bool is_zero() const { return pieces_.empty(); }

  /// Hull of the pieces; empty for the zero function.
  std::optional<Interval> support() const {
    if (pieces_.empty()) return std::nullopt;
    return Interval{pieces_.front().span.lo, pieces_.back().span.hi};
  }

  bool is_polynomial() const {
    for (const auto& p : pieces_)
      for (const auto& t : p.terms)
        if (t.power < 0 || t.log_exp != 0) return false;
    return true;
  }

  /// Pointwise value. Pieces are half-open [lo, hi); a boundary point
  /// belongs to the piece that starts there. Zero outside all pieces.
  double operator()(double x) const {
    if (!(x > 0.0)) throw std::domain_error("evaluate requires x > 0");
    const Piece* p = piece_at(x);
    return p ? detail::eval_terms(p->terms, x) : 0.0;
  }

  const Piece* piece_at(double x) const {
    auto it = std::upper_bound(
        pieces_.begin(), pieces_.end(), x,
        [](double v, const Piece& p) { return v < p.span.lo; });
    if (it == pieces_.begin()) return nullptr;
    --it;
    return it->span.contains(x) ? &*it : nullptr;
  }

 private:
  std::vector<Piece> pieces_;  // sorted, disjoint
};

inline double evaluate(const PiecewiseFunction& f, double x) { return f(x); }

/// Exact definite integral over [a, b] via closed-form antiderivatives.
inline double definite_integral(const PiecewiseFunction& f, double a,
                                double b) {
  if (!(a >= 0.0) || !(b >= a)) {
    throw parameter_domain_error("definite_integral requires 0 <= a <= b");
  }
  double total = 0.0;
  for (const auto& p : f.pieces()) {
    double u = std::max(a, p.span.lo);
    double v = std::min(b, p.span.hi);
    if (v <= u) continue;
    auto F = antiderivative(p.terms);
    total += detail::eval_terms_limit(F, v) - detail::eval_terms_limit(F, u);
  }
  return total;
}

/// Pointwise linear combination sum_i c_i f_i. Piece boundaries of the
/// result are the union of the input boundaries.
inline PiecewiseFunction linear_combine(
    const std::vector<std::pair<double, PiecewiseFunction>>& fs) {
  std::vector<double> cuts;
  for (const auto& [c, f] : fs) {
    (void)c;
    for (const auto& p : f.pieces()) {
      cuts.push_back(p.span.lo);
      cuts.push_back(p.span.hi);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Piece> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Interval cell{cuts[i], cuts[i + 1]};
    std::vector<Term> terms;
    for (const auto& [c, f] : fs) {
      const Piece* p = f.piece_at(cell.lo);
      if (!p || p->span.hi < cell.hi) continue;
      for (const auto& t : p->terms) terms.push_back({c * t.coeff, t.power, t.log_exp});
    }
    if (!terms.empty()) out.push_back({cell, std::move(terms)});
  }
  return PiecewiseFunction::from_pieces(std::move(out));
}

inline PiecewiseFunction scale(const PiecewiseFunction& f, double c) {
  std::vector<Piece> out;
  for (const auto& p : f.pieces()) {
    std::vector<Term> ts;
    ts.reserve(p.terms.size());
    for (const auto& t : p.terms) ts.push_back({c * t.coeff, t.power, t.log_exp});
    out.push_back({p.span, std::move(ts)});
  }
  return PiecewiseFunction::from_pieces(std::move(out));
}

/// g(x) = f(lambda x), exact. A term c x^k (ln(lambda x))^m is expanded
/// binomially in ln x, so the result stays inside the term class.
inline PiecewiseFunction dilate(const PiecewiseFunction& f, double lambda) {
  if (!(lambda > 0.0)) throw parameter_domain_error("dilate requires lambda > 0");
  double ll = std::log(lambda);
  std::vector<Piece> out;
  for (const auto& p : f.pieces()) {
    std::vector<Term> ts;
    for (const auto& t : p.terms) {
      double base = t.coeff * detail::int_pow(lambda, t.power);
      switch (t.log_exp) {
        case 0:
          ts.push_back({base, t.power, 0});
          break;
        case 1:
          ts.push_back({base, t.power, 1});
          ts.push_back({base * ll, t.power, 0});
          break;
        default:
          ts.push_back({base, t.power, 2});
          ts.push_back({2.0 * base * ll, t.power, 1});
          ts.push_back({base * ll * ll, t.power, 0});
          break;
      }
    }
    out.push_back({Interval{p.span.lo / lambda, p.span.hi / lambda}, std::move(ts)});
  }
  return PiecewiseFunction::from_pieces(std::move(out));
}

/// Points where f changes sign, located to within tol. Each piece is
/// scanned with at least 1024 samples and bracketed changes are refined
/// by bisection. Tangential zeros without a sign change may be missed;
/// callers relying on sign segmentation tolerate that.
inline std::vector<double> sign_change_points(const PiecewiseFunction& f,
                                              double tol,
                                              int min_samples = 1024) {
  if (!(tol > 0.0)) throw parameter_domain_error("sign_change_points: tol > 0");
  std::vector<double> roots;
  for (const auto& p : f.pieces()) {
    const double lo = p.span.lo, hi = p.span.hi;
    const int n = min_samples;
    // stay strictly inside the piece so log terms are finite
    double a = lo + (hi - lo) * 1e-12;
    double h = (hi - (hi - lo) * 1e-12 - a) / n;
    double xa = a;
    double fa = detail::eval_terms(p.terms, xa);
    for (int i = 1; i <= n; ++i) {
      double xb = a + i * h;
      double fb = detail::eval_terms(p.terms, xb);
      if (fa == 0.0) {
        // exact zero at a sample; count it as a located point
        if (roots.empty() || xa - roots.back() > tol) roots.push_back(xa);
        xa = xb;
        fa = fb;
        continue;
      }
      if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
        double u = xa, v = xb, fu = fa;
        while (v - u > tol) {
          double m = 0.5 * (u + v);
          double fm = detail::eval_terms(p.terms, m);
          if ((fu < 0.0 && fm > 0.0) || (fu > 0.0 && fm < 0.0)) {
            v = m;
          } else {
            u = m;
            fu = fm;
          }
        }
        roots.push_back(0.5 * (u + v));
      }
      xa = xb;
      fa = fb;
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace hardy
