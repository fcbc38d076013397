#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "hardy/errors.hpp"
#include "hardy/norms.hpp"
#include "hardy/piecewise.hpp"
#include "hardy/rng.hpp"
#include "hardy/weight.hpp"

namespace hardy {

/// Parameter tuple of an atom class: exponents, moment order, weight,
/// support interval, and the optional logarithmic moment condition.
struct AtomSpec {
  double p = 1.0;             // in (0, 1]
  double q = kInfinity;       // in [1, inf]; inf is a distinguished value
  int s = 0;                  // vanishing moments 0..s
  Weight weight = Weight::unit();
  Interval interval;
  bool log_moment = false;
  bool allow_zero_left = false;

  void validate() const {
    if (!(p > 0.0 && p <= 1.0)) {
      throw parameter_domain_error("atom spec requires p in (0, 1]");
    }
    if (!is_inf(q)) {
      if (!(q >= 1.0)) throw parameter_domain_error("atom spec requires q >= 1");
      if (!(p < q)) throw parameter_domain_error("atom spec requires p < q for finite q");
    }
    if (s < 0) throw parameter_domain_error("atom spec requires s >= 0");
    check_interval(interval);
    if (!allow_zero_left && !(interval.lo > 0.0)) {
      throw parameter_domain_error(
          "atom spec requires x0 > 0 (pass allow_zero_left to relax)");
    }
  }

  /// Size budget (int_I w)^{1/q - 1/p}, with 1/q read as 0 at q = inf.
  double norm_budget() const {
    double e = (is_inf(q) ? 0.0 : 1.0 / q) - 1.0 / p;
    return std::pow(weight.mass(interval), e);
  }

  /// Reference scale for moment tolerances; dilation-friendly.
  double moment_scale() const { return norm_budget() * interval.width(); }

  int constraint_count() const { return s + 1 + (log_moment ? 1 : 0); }
};

/// A concrete function certified (or to be certified) against an AtomSpec.
struct Atom {
  AtomSpec spec;
  PiecewiseFunction fn;
  double norm_budget = 0.0;
};

/// Finite atomic combination sum_k lambda_k a_k with a common parameter set.
struct AtomicSum {
  double p = 1.0;
  std::vector<std::pair<double, Atom>> entries;
};

inline AtomicSum make_atomic_sum(std::vector<std::pair<double, Atom>> entries) {
  if (entries.empty()) throw parameter_domain_error("atomic sum must be non-empty");
  const AtomSpec& ref = entries.front().second.spec;
  for (const auto& [lambda, atom] : entries) {
    (void)lambda;
    const AtomSpec& s = atom.spec;
    bool same = s.p == ref.p && s.s == ref.s && s.log_moment == ref.log_moment &&
                s.weight == ref.weight &&
                (is_inf(s.q) ? is_inf(ref.q) : s.q == ref.q);
    if (!same) {
      throw parameter_domain_error("atomic sum entries must share p, q, s, weight");
    }
  }
  AtomicSum sum;
  sum.p = ref.p;
  sum.entries = std::move(entries);
  return sum;
}

/// (sum |lambda_k|^p)^{1/p} of the generating decomposition; an upper
/// bound for the space quasinorm (the infimum is not searched).
inline double sum_quasinorm_upper(const AtomicSum& sum) {
  if (sum.entries.empty()) throw parameter_domain_error("empty atomic sum");
  double acc = 0.0;
  for (const auto& [lambda, atom] : sum.entries) {
    (void)atom;
    acc += std::pow(std::abs(lambda), sum.p);
  }
  return std::pow(acc, 1.0 / sum.p);
}

inline PiecewiseFunction combined_fn(const AtomicSum& sum) {
  std::vector<std::pair<double, PiecewiseFunction>> fs;
  fs.reserve(sum.entries.size());
  for (const auto& [lambda, atom] : sum.entries) fs.emplace_back(lambda, atom.fn);
  return linear_combine(fs);
}

/// Exact moment int f(x) x^beta dx over the support of f.
inline double moment(const PiecewiseFunction& f, int beta) {
  if (beta < 0) throw parameter_domain_error("moment requires beta >= 0");
  double total = 0.0;
  for (const auto& p : f.pieces()) {
    std::vector<Term> shifted;
    shifted.reserve(p.terms.size());
    for (const auto& t : p.terms) shifted.push_back({t.coeff, t.power + beta, t.log_exp});
    auto F = antiderivative(shifted);
    total += detail::eval_terms_limit(F, p.span.hi) -
             detail::eval_terms_limit(F, p.span.lo);
  }
  return total;
}

/// Exact logarithmic moment int f(x) ln x dx.
inline double log_moment(const PiecewiseFunction& f) {
  double total = 0.0;
  for (const auto& p : f.pieces()) {
    std::vector<Term> lifted;
    lifted.reserve(p.terms.size());
    for (const auto& t : p.terms) {
      if (t.log_exp + 1 > kMaxLogExp) {
        throw unsupported_term_error("log moment would need log exponent 3");
      }
      lifted.push_back({t.coeff, t.power, t.log_exp + 1});
    }
    auto F = antiderivative(lifted);
    total += detail::eval_terms_limit(F, p.span.hi) -
             detail::eval_terms_limit(F, p.span.lo);
  }
  return total;
}

namespace detail {

inline double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// int_{-1}^{1} t^n dt
inline double symmetric_power_integral(int n) {
  return (n % 2 == 0) ? 2.0 / (n + 1) : 0.0;
}

// int_I x^i ln x dx, valid for lo = 0 as a limit.
inline double power_log_integral(const Interval& iv, int i) {
  auto F = antiderivative({Term{1.0, i, 1}});
  return eval_terms_limit(F, iv.hi) - eval_terms_limit(F, iv.lo);
}

/// Orthonormal null-space basis of the constraint matrix, with a rank
/// guard. Rows are scaled to unit norm first (pure row scaling does not
/// change the null space).
inline Eigen::MatrixXd null_space_basis(Eigen::MatrixXd M, double rank_tol) {
  const auto rows = M.rows();
  const auto cols = M.cols();
  for (Eigen::Index r = 0; r < rows; ++r) {
    double n = M.row(r).norm();
    if (n == 0.0) throw numerical_rank_error("zero constraint row");
    M.row(r) /= n;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(rows - 1) < rank_tol * sv(0)) {
    throw numerical_rank_error(
        "moment matrix is rank-deficient beyond tolerance; the interval is "
        "too ill-conditioned for a reliable construction");
  }
  return svd.matrixV().rightCols(cols - rows);
}

inline std::vector<double> unit_combination(const Eigen::MatrixXd& basis,
                                            const std::vector<double>& direction) {
  if (static_cast<Eigen::Index>(direction.size()) != basis.cols()) {
    throw parameter_domain_error(
        "direction dimension must match the null-space dimension (" +
        std::to_string(basis.cols()) + ")");
  }
  Eigen::Map<const Eigen::VectorXd> u(direction.data(),
                                      static_cast<Eigen::Index>(direction.size()));
  double n = u.norm();
  if (!(n > 0.0)) throw parameter_domain_error("direction must be nonzero");
  Eigen::VectorXd c = basis * (u / n);
  return std::vector<double>(c.data(), c.data() + c.size());
}

inline std::vector<double> random_direction(Eigen::Index dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> u(static_cast<std::size_t>(dim));
  double n = 0.0;
  while (n == 0.0) {  // astronomically unlikely to loop
    for (auto& v : u) v = rng.gaussian();
    n = 0.0;
    for (double v : u) n += v * v;
  }
  return u;
}

}  // namespace detail

/// Null-space dimension available to atoms of the given degree.
inline int atom_null_dimension(const AtomSpec& spec, int degree) {
  return degree + 1 - spec.constraint_count();
}

inline constexpr double kRankTolerance = 1e-8;

/// Build a single-piece polynomial atom of degree <= degree satisfying all
/// conditions of the spec, with the size condition saturated (weighted L^q
/// norm equal to the budget up to quadrature accuracy).
///
/// The moment system is assembled in the monomial basis of the affinely
/// rescaled variable t in [-1, 1] for conditioning; the given direction
/// (normalized) picks a point of the null-space sphere, which is converted
/// back to x-monomials and rescaled to saturate the budget.
inline Atom build_atom_directed(const AtomSpec& spec, int degree,
                                const std::vector<double>& direction) {
  spec.validate();
  const int ncon = spec.constraint_count();
  const int ncoef = degree + 1;
  if (ncoef <= ncon) {
    throw infeasible_error(
        "degree " + std::to_string(degree) + " admits no atom with " +
        std::to_string(ncon) + " moment constraints; raise the degree");
  }
  const double m = 0.5 * (spec.interval.lo + spec.interval.hi);
  const double h = 0.5 * spec.interval.width();

  Eigen::MatrixXd M(ncon, ncoef);
  for (int beta = 0; beta <= spec.s; ++beta) {
    for (int j = 0; j < ncoef; ++j) {
      // int_I t(x)^j x^beta dx with x = m + h t
      double acc = 0.0;
      for (int i = 0; i <= beta; ++i) {
        acc += detail::binom(beta, i) * detail::int_pow(m, beta - i) *
               detail::int_pow(h, i) * detail::symmetric_power_integral(i + j);
      }
      M(beta, j) = h * acc;
    }
  }
  if (spec.log_moment) {
    for (int j = 0; j < ncoef; ++j) {
      // expand t(x)^j into x-monomials, then use the exact x^i ln x integral
      double acc = 0.0;
      for (int i = 0; i <= j; ++i) {
        acc += detail::binom(j, i) * detail::int_pow(-m, j - i) *
               detail::power_log_integral(spec.interval, i);
      }
      M(ncon - 1, j) = acc / detail::int_pow(h, j);
    }
  }

  Eigen::MatrixXd basis = detail::null_space_basis(std::move(M), kRankTolerance);
  std::vector<double> ct = detail::unit_combination(basis, direction);

  // convert sum_j ct[j] t^j to x-monomial terms
  std::vector<double> cx(static_cast<std::size_t>(ncoef), 0.0);
  for (int j = 0; j < ncoef; ++j) {
    double cj = ct[static_cast<std::size_t>(j)] / detail::int_pow(h, j);
    for (int i = 0; i <= j; ++i) {
      cx[static_cast<std::size_t>(i)] +=
          cj * detail::binom(j, i) * detail::int_pow(-m, j - i);
    }
  }
  std::vector<Term> terms;
  for (int i = 0; i < ncoef; ++i) {
    if (cx[static_cast<std::size_t>(i)] != 0.0) {
      terms.push_back({cx[static_cast<std::size_t>(i)], i, 0});
    }
  }
  auto fn = PiecewiseFunction::single(spec.interval, std::move(terms));

  double budget = spec.norm_budget();
  double nu = lq_norm(fn, spec.q, spec.weight, 1e-12);
  if (!(nu > 0.0)) throw infeasible_error("degenerate atom candidate");
  Atom atom{spec, scale(fn, budget / nu), budget};

  // The null space is exact in the t-basis, but narrow-ratio intervals
  // amplify the x-monomial coefficients until the stored doubles can no
  // longer cancel the moments. Refuse to hand out an atom whose own
  // certificate would be weaker than the construction tolerance.
  double ms = spec.moment_scale();
  for (int beta = 0; beta <= spec.s; ++beta) {
    if (std::abs(moment(atom.fn, beta)) > 1e-11 * ms) {
      throw numerical_rank_error(
          "interval is too narrow relative to its distance from 0 for the "
          "monomial representation to hold the moment conditions; rescale "
          "or widen the interval");
    }
  }
  if (spec.log_moment && std::abs(log_moment(atom.fn)) > 1e-11 * ms) {
    throw numerical_rank_error(
        "interval is too narrow relative to its distance from 0 for the "
        "monomial representation to hold the log-moment condition; rescale "
        "or widen the interval");
  }
  return atom;
}

/// Seeded variant: draws the null-space direction from the seed.
inline Atom build_atom(const AtomSpec& spec, int degree, std::uint64_t seed) {
  spec.validate();
  int dim = atom_null_dimension(spec, degree);
  if (dim < 1) {
    throw infeasible_error(
        "degree " + std::to_string(degree) + " admits no atom with " +
        std::to_string(spec.constraint_count()) +
        " moment constraints; raise the degree");
  }
  return build_atom_directed(spec, degree, detail::random_direction(dim, seed));
}

/// Piecewise-constant atom on nsteps equal cells of the interval, built
/// with the same moment-matrix machinery as the polynomial atoms.
inline Atom build_step_atom_directed(const AtomSpec& spec, int nsteps,
                                     const std::vector<double>& direction) {
  spec.validate();
  const int ncon = spec.constraint_count();
  if (nsteps <= ncon) {
    throw infeasible_error("step atom needs more steps than constraints");
  }
  const double lo = spec.interval.lo;
  const double w = spec.interval.width() / nsteps;

  Eigen::MatrixXd M(ncon, nsteps);
  for (int j = 0; j < nsteps; ++j) {
    Interval cell{lo + j * w, lo + (j + 1) * w};
    for (int beta = 0; beta <= spec.s; ++beta) {
      M(beta, j) = (std::pow(cell.hi, beta + 1) - std::pow(cell.lo, beta + 1)) /
                   (beta + 1);
    }
    if (spec.log_moment) M(ncon - 1, j) = detail::power_log_integral(cell, 0);
  }

  Eigen::MatrixXd basis = detail::null_space_basis(std::move(M), kRankTolerance);
  std::vector<double> values = detail::unit_combination(basis, direction);

  std::vector<Piece> pieces;
  for (int j = 0; j < nsteps; ++j) {
    Interval cell{lo + j * w, lo + (j + 1) * w};
    pieces.push_back({cell, {Term{values[static_cast<std::size_t>(j)], 0, 0}}});
  }
  auto fn = PiecewiseFunction::from_pieces(std::move(pieces));

  double budget = spec.norm_budget();
  double nu = lq_norm(fn, spec.q, spec.weight, 1e-12);
  if (!(nu > 0.0)) throw infeasible_error("degenerate step atom candidate");
  return Atom{spec, scale(fn, budget / nu), budget};
}

inline Atom build_step_atom(const AtomSpec& spec, int nsteps, std::uint64_t seed) {
  spec.validate();
  int dim = nsteps - spec.constraint_count();
  if (dim < 1) {
    throw infeasible_error("step atom needs more steps than constraints");
  }
  return build_step_atom_directed(spec, nsteps, detail::random_direction(dim, seed));
}

/// The canonical two-step atom: +v on the left half, -v on the right half,
/// with v chosen to saturate the unit-weight budget (v = |I|^{-1/p} for
/// every q). The near-extremizer for the p = 1, q = inf bound.
inline Atom square_wave_atom(double p, double q, const Interval& interval,
                             bool allow_zero_left = false) {
  AtomSpec spec;
  spec.p = p;
  spec.q = q;
  spec.s = 0;
  spec.weight = Weight::unit();
  spec.interval = interval;
  spec.allow_zero_left = allow_zero_left;
  spec.validate();
  double v = std::pow(interval.width(), -1.0 / p);
  double mid = 0.5 * (interval.lo + interval.hi);
  auto fn = PiecewiseFunction::from_pieces(
      {Piece{{interval.lo, mid}, {Term{v, 0, 0}}},
       Piece{{mid, interval.hi}, {Term{-v, 0, 0}}}});
  return Atom{spec, std::move(fn), spec.norm_budget()};
}

/// Outcome of checking a function against the atom conditions: support,
/// size (both with tolerance and strictly), vanishing moments, and the
/// optional log moment, together with the measured values.
struct AtomValidationReport {
  bool support_ok = false;
  bool size_ok = false;
  bool size_strict_ok = false;
  bool moments_ok = false;
  bool log_moment_ok = true;
  bool trivial = false;
  bool strict_size_required = false;

  double norm_measured = 0.0;
  double norm_error = 0.0;
  double norm_budget = 0.0;
  double scale = 0.0;
  double tol = 0.0;
  std::vector<double> moments;
  double log_moment_value = std::numeric_limits<double>::quiet_NaN();

  bool passed() const {
    return support_ok && (strict_size_required ? size_strict_ok : size_ok) &&
           moments_ok && log_moment_ok;
  }
};

/// Check every atom condition of the spec on fn. Failures are reported,
/// never thrown.
inline AtomValidationReport validate_atom(const PiecewiseFunction& fn,
                                          const AtomSpec& spec, double tol) {
  if (!(tol > 0.0)) throw parameter_domain_error("validate_atom requires tol > 0");
  AtomValidationReport rep;
  rep.tol = tol;
  rep.norm_budget = spec.norm_budget();
  rep.scale = spec.moment_scale();
  rep.trivial = fn.is_zero();

  if (auto hull = fn.support()) {
    double slack = 1e-12 * (spec.interval.hi + spec.interval.width());
    rep.support_ok = hull->lo >= spec.interval.lo - slack &&
                     hull->hi <= spec.interval.hi + slack;
  } else {
    rep.support_ok = true;
  }

  double rel = std::min(std::max(0.01 * tol, 2e-13), 1e-3);
  QuadResult nq = lq_norm_result(fn, spec.q, spec.weight, rel);
  rep.norm_measured = nq.value;
  rep.norm_error = nq.abs_error_estimate;
  rep.size_ok = nq.value <= rep.norm_budget * (1.0 + tol);
  rep.size_strict_ok = nq.value + nq.abs_error_estimate < rep.norm_budget;

  rep.moments_ok = true;
  for (int beta = 0; beta <= spec.s; ++beta) {
    double mv = moment(fn, beta);
    rep.moments.push_back(mv);
    if (std::abs(mv) > tol * rep.scale) rep.moments_ok = false;
  }
  if (spec.log_moment) {
    rep.log_moment_value = log_moment(fn);
    rep.log_moment_ok = std::abs(rep.log_moment_value) <= tol * rep.scale;
  }
  return rep;
}

}  // namespace hardy
