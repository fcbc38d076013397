#pragma once

#include <cmath>

#include "hardy/errors.hpp"
#include "hardy/piecewise.hpp"

namespace hardy {

/// Weight function on the positive half-line: either w == 1 or w(x) = x^alpha.
struct Weight {
  enum class Kind { unit, power };

  Kind kind = Kind::unit;
  double alpha = 0.0;

  static Weight unit() { return {}; }

  static Weight power(double alpha) {
    if (!(alpha > -1.0)) {
      throw parameter_domain_error(
          "power weight requires alpha > -1 (finite mass near 0)");
    }
    return {Kind::power, alpha};
  }

  bool is_unit() const { return kind == Kind::unit; }

  double operator()(double x) const {
    return is_unit() ? 1.0 : std::pow(x, alpha);
  }

  /// Exact mass of the weight over an interval:
  ///   int_lo^hi w = (hi^{a+1} - lo^{a+1}) / (a+1).
  double mass(const Interval& iv) const {
    check_interval(iv);
    if (is_unit()) return iv.width();
    double e = alpha + 1.0;
    return (std::pow(iv.hi, e) - std::pow(iv.lo, e)) / e;
  }

  bool operator==(const Weight& o) const {
    return kind == o.kind && (is_unit() || alpha == o.alpha);
  }
};

/// Mass of a weight over an interval (Definition-style budget input).
inline double weight_mass(const Weight& w, const Interval& iv) {
  return w.mass(iv);
}

}  // namespace hardy
