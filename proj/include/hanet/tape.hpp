#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "hanet/ops.hpp"
#include "hanet/tensor.hpp"

namespace hanet {

// A differentiable value: the forward result plus a same-shape gradient
// buffer that backward passes accumulate into.
struct GradPair {
    Tensor value;
    Tensor grad;
};

using VarPtr = std::shared_ptr<GradPair>;

VarPtr make_var(Tensor value);

// Reverse-mode tape. Each recorded closure propagates the gradient of one
// op's output into its inputs; backward() replays them newest-first. Create
// a fresh tape per forward pass — replaying twice would double-accumulate.
class Tape {
  public:
    void record(std::function<void()> vjp) { nodes_.push_back(std::move(vjp)); }
    void backward() {
        for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) (*it)();
    }
    size_t size() const { return nodes_.size(); }

  private:
    std::vector<std::function<void()>> nodes_;
};

// Tape-recording wrappers around the ops kernels. Values are computed
// eagerly; the matching VJP is pushed onto the tape.
VarPtr matmul(Tape& tape, const VarPtr& a, const VarPtr& b);
VarPtr conv1x1(Tape& tape, const VarPtr& x, const VarPtr& w, const VarPtr& bias);
VarPtr conv3x3(Tape& tape, const VarPtr& x, const VarPtr& w, const VarPtr& bias, int stride);
VarPtr bilinear_upsample(Tape& tape, const VarPtr& x, int factor);
VarPtr relu(Tape& tape, const VarPtr& x);
VarPtr row_softmax(Tape& tape, const VarPtr& a);
VarPtr scaled_gram(Tape& tape, const VarPtr& q, const VarPtr& k, double alpha);
VarPtr concat_channels(Tape& tape, const std::vector<VarPtr>& xs);
VarPtr reshape(Tape& tape, const VarPtr& x, std::vector<size_t> shape);
// scalar loss, shape [1]
VarPtr cross_entropy(Tape& tape, const VarPtr& logits, std::vector<int> labels);

}  // namespace hanet
