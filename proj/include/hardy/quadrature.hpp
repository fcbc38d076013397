#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <queue>
#include <vector>

#include "hardy/errors.hpp"

namespace hardy {

/// Result of an adaptive quadrature: value, an absolute error estimate,
/// and the number of subdivisions spent.
struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int subdivisions = 0;

  QuadResult& operator+=(const QuadResult& o) {
    value += o.value;
    abs_error_estimate += o.abs_error_estimate;
    subdivisions += o.subdivisions;
    return *this;
  }
};

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1].
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct GkEstimate {
  double value;
  double error;
};

template <typename F>
GkEstimate gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kKronrodNodes[i]);
    fv[14 - i] = f(c + h * kKronrodNodes[i]);
  }
  fv[7] = f(c);
  double kron = 0.0, gauss = 0.0;
  for (int i = 0; i < 7; ++i) {
    kron += kKronrodWeights[i] * (fv[i] + fv[14 - i]);
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * (fv[i] + fv[14 - i]);
  }
  kron += kKronrodWeights[7] * fv[7];
  gauss += kGaussWeights[3] * fv[7];
  double value = kron * h;
  double error = std::abs((kron - gauss) * h);
  return {value, error};
}

struct Segment {
  double a, b;
  double value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of a callable over [a, b].
/// Refines the segment with the largest error estimate until
///   sum(errors) <= rel_tol * |value| + abs_floor
/// or the subdivision budget is exhausted (the returned estimate stays
/// honest in that case).
template <typename F>
QuadResult adaptive_integrate(const F& f, double a, double b, double rel_tol,
                              double abs_floor = 1e-14,
                              int max_segments = 4000) {
  QuadResult out;
  if (!(b > a)) return out;
  std::priority_queue<detail::Segment> heap;
  auto est = detail::gk15(f, a, b);
  heap.push({a, b, est.value, est.error});
  double total = est.value, err = est.error;
  int used = 1;
  while (err > rel_tol * std::abs(total) + abs_floor && used < max_segments) {
    detail::Segment s = heap.top();
    heap.pop();
    double m = 0.5 * (s.a + s.b);
    if (!(m > s.a && m < s.b)) {  // cannot split further in doubles
      err -= s.error;
      heap.push({s.a, s.b, s.value, 0.0});
      continue;
    }
    auto l = detail::gk15(f, s.a, m);
    auto r = detail::gk15(f, m, s.b);
    total += l.value + r.value - s.value;
    err += l.error + r.error - s.error;
    heap.push({s.a, m, l.value, l.error});
    heap.push({m, s.b, r.value, r.error});
    ++used;
  }
  out.value = total;
  out.abs_error_estimate = std::max(err, 0.0);
  out.subdivisions = used;
  return out;
}

/// Same, but with the substitution x = t^2 applied at a zero left endpoint.
/// Softens algebraic endpoint behavior of integrands on intervals that
/// touch the origin.
template <typename F>
QuadResult adaptive_integrate_zero_left(const F& f, double b, double rel_tol,
                                        double abs_floor = 1e-14,
                                        int max_segments = 4000) {
  auto g = [&f](double t) { return 2.0 * t * f(t * t); };
  return adaptive_integrate(g, 0.0, std::sqrt(b), rel_tol, abs_floor,
                            max_segments);
}

}  // namespace hardy
