#pragma once

#include <stdexcept>
#include <string>

namespace hardy {

/// Requested closed form does not exist inside the term class
/// (integration would need a log exponent above 2).
class unsupported_term_error : public std::domain_error {
 public:
  explicit unsupported_term_error(const std::string& what)
      : std::domain_error(what) {}
};

/// An integral is provably infinite for the requested exponent.
class divergence_error : public std::runtime_error {
 public:
  explicit divergence_error(const std::string& what)
      : std::runtime_error(what) {}
};

/// Atom construction has no degrees of freedom left (degree too small
/// for the requested moment constraints).
class infeasible_error : public std::runtime_error {
 public:
  explicit infeasible_error(const std::string& what)
      : std::runtime_error(what) {}
};

/// Moment matrix is rank-deficient beyond tolerance; the interval is too
/// ill-conditioned for a reliable null-space solve.
class numerical_rank_error : public std::runtime_error {
 public:
  explicit numerical_rank_error(const std::string& what)
      : std::runtime_error(what) {}
};

/// Parameters are outside the admissible domain of a check or builder.
class parameter_domain_error : public std::invalid_argument {
 public:
  explicit parameter_domain_error(const std::string& what)
      : std::invalid_argument(what) {}
};

}  // namespace hardy
