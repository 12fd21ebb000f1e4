#pragma once

#include "pnf/common.hpp"

namespace pnf {

/// Faddeeva function w(z) = exp(-z^2) erfc(-i z), Weideman's rational
/// approximation with 40 terms (relative accuracy near 1e-14).
Complex faddeeva_w(Complex z);

}  // namespace pnf
