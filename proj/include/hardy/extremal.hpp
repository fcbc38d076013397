#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hardy/atoms.hpp"
#include "hardy/constants.hpp"
#include "hardy/operators.hpp"
#include "hardy/parallel.hpp"
#include "hardy/rng.hpp"

namespace hardy {

enum class Objective { prop1, prop4, log2 };

inline const char* to_string(Objective o) {
  switch (o) {
    case Objective::prop1:
      return "prop1";
    case Objective::prop4:
      return "prop4";
    default:
      return "log2";
  }
}

enum class AtomFamily { polynomial, steps, both };

/// Derivative-free search for the worst-case atom of a bound. The interval
/// is parameterized as (r, 1) with r searched on a log scale (dilation
/// invariance of all three objectives makes x1 = 1 exhaustive), and the
/// atom itself by a point on the null-space sphere of its family.
struct SearchConfig {
  double p = 1.0;
  double q = kInfinity;
  int s = 0;
  Objective objective = Objective::prop1;
  AtomFamily family = AtomFamily::both;
  int degree = 2;        // polynomial degree; the step family uses degree+1 cells
  int restarts = 4;
  int max_iters = 200;
  std::uint64_t seed = 0;
  double rel_tol = 1e-7;  // quadrature tolerance during the search
};

struct ExtremalResult {
  Atom best_atom;
  double best_value = 0.0;
  double bound = 0.0;
  double tightness = 0.0;
  double best_r = 0.0;
  std::vector<std::pair<int, double>> trajectory;  // (iteration, best so far)
  long evaluations = 0;
  long bound_violations = 0;
};

namespace detail {

inline constexpr double kLogRMin = -18.420680743952367;  // ln 1e-8
inline constexpr double kLogRMax = -0.05129329438755058;  // ln 0.95

struct ObjectiveContext {
  SearchConfig cfg;
  double bound = 0.0;

  explicit ObjectiveContext(const SearchConfig& c) : cfg(c) {
    switch (cfg.objective) {
      case Objective::prop1:
        bound = constants::c1_pow(cfg.p, cfg.q);
        break;
      case Objective::prop4:
        constants::require_dual_domain(cfg.p, cfg.q, "extremize(prop4)");
        bound = constants::c2_pow(cfg.p, cfg.q);
        break;
      case Objective::log2:
        if (cfg.p != 1.0 || !is_inf(cfg.q)) {
          throw parameter_domain_error("log2 objective requires p = 1, q = inf");
        }
        bound = constants::kLn2;
        break;
    }
  }

  AtomSpec spec_at(double r) const {
    AtomSpec s;
    s.p = cfg.p;
    s.q = cfg.q;
    s.s = cfg.s;
    s.weight = cfg.objective == Objective::prop4 ? Weight::power(cfg.p)
                                                 : Weight::unit();
    s.interval = Interval{r, 1.0};
    return s;
  }

  // even cell count so the family contains midpoint-split square waves
  int step_cells() const {
    int cells = cfg.degree + 1;
    if (cells % 2) ++cells;
    return std::max(cells, 2);
  }

  Atom build(bool steps, double r, const std::vector<double>& dir) const {
    AtomSpec s = spec_at(r);
    return steps ? build_step_atom_directed(s, step_cells(), dir)
                 : build_atom_directed(s, cfg.degree, dir);
  }

  QuadResult evaluate(const Atom& a, double rel_tol) const {
    switch (cfg.objective) {
      case Objective::prop4:
        return lp_integral(apply_dual_hardy(a.fn).fn, cfg.p, Weight::unit(),
                           rel_tol);
      default:
        return lp_integral(apply_hardy(a.fn), cfg.p, Weight::unit(), rel_tol);
    }
  }
};

struct RestartOutcome {
  double value = -1.0;
  double r = 0.0;
  std::optional<Atom> atom;
  std::vector<std::pair<int, double>> trajectory;
  long evaluations = 0;
  long violations = 0;
};

}  // namespace detail

/// Maximize the objective over the atom family; compass search with
/// shrinking steps and seeded random restarts set off deterministically.
inline ExtremalResult extremize(const SearchConfig& cfg) {
  detail::ObjectiveContext ctx(cfg);
  if (cfg.restarts < 1 || cfg.max_iters < 1) {
    throw parameter_domain_error("extremize requires restarts >= 1, max_iters >= 1");
  }

  std::vector<bool> families;
  if (cfg.family != AtomFamily::steps) families.push_back(false);
  if (cfg.family != AtomFamily::polynomial) families.push_back(true);

  struct Task {
    bool steps;
    int restart;
  };
  std::vector<Task> tasks;
  for (bool st : families)
    for (int k = 0; k < cfg.restarts; ++k) tasks.push_back({st, k});

  std::vector<detail::RestartOutcome> outcomes(tasks.size());

  auto run_one = [&](std::size_t ti) {
    const Task task = tasks[ti];
    detail::RestartOutcome out;
    const int dim =
        task.steps
            ? ctx.step_cells() - ctx.spec_at(0.5).constraint_count()
            : atom_null_dimension(ctx.spec_at(0.5), cfg.degree);
    if (dim < 1) {
      outcomes[ti] = std::move(out);  // family infeasible at this degree
      return;
    }
    Rng rng(cfg.seed * 0x9e3779b9ULL + 1000003ULL * task.restart +
            (task.steps ? 77ULL : 0ULL));
    std::vector<double> z(static_cast<std::size_t>(dim) + 1);
    for (int i = 0; i < dim; ++i) z[static_cast<std::size_t>(i)] = rng.gaussian();
    z.back() = rng.uniform(std::log(1e-4), std::log(0.5));

    auto eval_point = [&](const std::vector<double>& pt) -> double {
      double rho = std::clamp(pt.back(), detail::kLogRMin, detail::kLogRMax);
      double r = std::exp(rho);
      ++out.evaluations;
      try {
        std::vector<double> dir(pt.begin(), pt.end() - 1);
        Atom a = ctx.build(task.steps, r, dir);
        QuadResult v = ctx.evaluate(a, cfg.rel_tol);
        if (v.value - v.abs_error_estimate > ctx.bound) ++out.violations;
        if (v.value > out.value) {
          out.value = v.value;
          out.r = r;
          out.atom = a;
        }
        return v.value;
      } catch (const numerical_rank_error&) {
        return -1.0;
      } catch (const infeasible_error&) {
        return -1.0;
      }
    };

    double current = eval_point(z);
    double step_v = 0.6, step_r = 1.2;
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
      double best_move = current;
      std::vector<double> best_z = z;
      for (std::size_t i = 0; i < z.size(); ++i) {
        double step = (i + 1 == z.size()) ? step_r : step_v;
        for (double sgn : {1.0, -1.0}) {
          std::vector<double> cand = z;
          cand[i] += sgn * step;
          double v = eval_point(cand);
          if (v > best_move) {
            best_move = v;
            best_z = std::move(cand);
          }
        }
      }
      if (best_move > current) {
        current = best_move;
        z = std::move(best_z);
      } else {
        step_v *= 0.5;
        step_r *= 0.5;
      }
      out.trajectory.emplace_back(iter, out.value);
    }
    outcomes[ti] = std::move(out);
  };

  parallel_for_indexed(tasks.size(), default_jobs(), run_one);

  ExtremalResult res;
  res.bound = ctx.bound;
  std::size_t best_ti = tasks.size();
  for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
    res.evaluations += outcomes[ti].evaluations;
    res.bound_violations += outcomes[ti].violations;
    if (outcomes[ti].atom &&
        (best_ti == tasks.size() || outcomes[ti].value > outcomes[best_ti].value)) {
      best_ti = ti;
    }
  }
  if (best_ti == tasks.size()) {
    throw infeasible_error("extremize found no feasible atom; raise the degree");
  }
  const auto& best = outcomes[best_ti];
  res.best_atom = *best.atom;
  res.best_r = best.r;
  res.trajectory = best.trajectory;
  // refine the winner's objective value at reporting accuracy
  QuadResult refined = ctx.evaluate(res.best_atom, 1e-10);
  res.best_value = refined.value;
  res.tightness = res.best_value / res.bound;
  return res;
}

/// One sweep row; inadmissible grid points are kept with a skip reason.
struct TightnessRow {
  double p = 0.0, q = 0.0;
  int s = 0;
  bool skipped = false;
  std::string reason;
  double r = 0.0, tightness = 0.0, best_value = 0.0, bound = 0.0;
  std::uint64_t seed = 0;
  int iters = 0;
  long evaluations = 0;
  long bound_violations = 0;
};

/// Run extremize over a (p, q) grid with per-row derived seeds.
inline std::vector<TightnessRow> tightness_sweep(
    const std::vector<std::pair<double, double>>& grid,
    const SearchConfig& base, unsigned jobs = 0) {
  std::vector<TightnessRow> rows(grid.size());
  if (jobs == 0) jobs = default_jobs();
  parallel_for_indexed(grid.size(), jobs, [&](std::size_t i) {
    TightnessRow row;
    row.p = grid[i].first;
    row.q = grid[i].second;
    row.s = base.s;
    row.seed = base.seed + 7919ULL * i;
    row.iters = base.max_iters;
    SearchConfig cfg = base;
    cfg.p = row.p;
    cfg.q = row.q;
    cfg.seed = row.seed;
    try {
      ExtremalResult r = extremize(cfg);
      row.r = r.best_r;
      row.tightness = r.tightness;
      row.best_value = r.best_value;
      row.bound = r.bound;
      row.evaluations = r.evaluations;
      row.bound_violations = r.bound_violations;
    } catch (const parameter_domain_error& e) {
      row.skipped = true;
      row.reason = e.what();
    } catch (const infeasible_error& e) {
      row.skipped = true;
      row.reason = e.what();
    }
    rows[i] = std::move(row);
  });
  return rows;
}

}  // namespace hardy
