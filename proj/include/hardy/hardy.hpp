#pragma once

// Umbrella header: atoms of weighted Hardy-type spaces on the half-line,
// closed-form application of the averaging operator and its dual, and
// numerical certification of the associated inequalities.

#include "hardy/atoms.hpp"
#include "hardy/constants.hpp"
#include "hardy/errors.hpp"
#include "hardy/extremal.hpp"
#include "hardy/norms.hpp"
#include "hardy/operators.hpp"
#include "hardy/piecewise.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/report.hpp"
#include "hardy/rng.hpp"
#include "hardy/serialization.hpp"
#include "hardy/verify.hpp"
#include "hardy/version.hpp"
#include "hardy/weight.hpp"
