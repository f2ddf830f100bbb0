#pragma once

#include <functional>

#include "hanet/tensor.hpp"

namespace hanet {

// Compares an analytic gradient of a scalar function f against central
// differences, coordinate by coordinate. Returns the worst relative error
//   |analytic - numeric| / max(1e-8, |analytic| + |numeric|).
// Throws NumericError if f produces a non-finite value.
double grad_check(const std::function<double(const Tensor&)>& f, const Tensor& x,
                  const Tensor& analytic, double eps = 1e-5);

}  // namespace hanet
