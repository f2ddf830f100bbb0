#pragma once

#include "hanet/tape.hpp"
#include "hanet/tensor.hpp"

namespace hanet {

// SGD with momentum and L2 weight decay folded into the gradient:
//   v <- momentum*v + grad + weight_decay*value
//   value <- value - lr*v
// The gradient buffer is zeroed afterwards so the next backward pass starts
// clean. velocity must match the parameter shape and persists across steps.
void sgd_step(GradPair& param, double lr, double momentum, double weight_decay,
              Tensor& velocity);

}  // namespace hanet
