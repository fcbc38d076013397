#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "hardy/piecewise.hpp"
#include "hardy/rng.hpp"

namespace testutil {

/// Composite Simpson quadrature on a fixed grid; independent of the
/// adaptive engine under test.
template <typename F>
double simpson(const F& f, double a, double b, int panels) {
  if (panels % 2 != 0) ++panels;
  double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) {
    acc += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
  }
  return acc * h / 3.0;
}

/// Central-difference derivative.
template <typename F>
double num_derivative(const F& f, double x, double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Random piecewise polynomial with `npieces` contiguous pieces inside
/// (0.05, 10) and degrees up to `max_degree`.
inline hardy::PiecewiseFunction random_polynomial(hardy::Rng& rng, int npieces,
                                                  int max_degree) {
  std::vector<double> cuts;
  double x = rng.uniform(0.05, 2.0);
  cuts.push_back(x);
  for (int i = 0; i < npieces; ++i) {
    x += rng.uniform(0.1, 2.5);
    cuts.push_back(x);
  }
  std::vector<hardy::Piece> pieces;
  for (int i = 0; i < npieces; ++i) {
    std::vector<hardy::Term> terms;
    int deg = 1 + static_cast<int>(rng.uniform() * max_degree);
    for (int k = 0; k <= deg; ++k) {
      terms.push_back({rng.uniform(-2.0, 2.0), k, 0});
    }
    pieces.push_back({{cuts[static_cast<std::size_t>(i)],
                       cuts[static_cast<std::size_t>(i) + 1]},
                      std::move(terms)});
  }
  return hardy::PiecewiseFunction::from_pieces(std::move(pieces));
}

/// Random generalized term set (powers down to -2, logs up to 2) on a
/// positive interval.
inline std::vector<hardy::Term> random_terms(hardy::Rng& rng, int count) {
  std::vector<hardy::Term> terms;
  for (int i = 0; i < count; ++i) {
    int power = static_cast<int>(rng.uniform(0.0, 7.0)) - 2;
    int log_exp = static_cast<int>(rng.uniform(0.0, 3.0));
    terms.push_back({rng.uniform(-3.0, 3.0), power, log_exp});
  }
  return terms;
}

}  // namespace testutil
