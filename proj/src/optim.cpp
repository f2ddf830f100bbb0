#include "hanet/optim.hpp"

#include <algorithm>

#include "hanet/errors.hpp"

namespace hanet {

void sgd_step(GradPair& param, double lr, double momentum, double weight_decay,
              Tensor& velocity) {
    if (!velocity.same_shape(param.value)) {
        throw DimensionError("sgd_step: velocity " + velocity.shape_str() +
                             " vs parameter " + param.value.shape_str());
    }
    for (size_t i = 0; i < param.value.size(); ++i) {
        velocity[i] = momentum * velocity[i] + param.grad[i] + weight_decay * param.value[i];
        param.value[i] -= lr * velocity[i];
    }
    std::fill(param.grad.vec().begin(), param.grad.vec().end(), 0.0);
}

}  // namespace hanet
