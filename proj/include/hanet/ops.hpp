#pragma once

#include <vector>

#include "hanet/tensor.hpp"

namespace hanet::ops {

// Every forward kernel below has a matching *_vjp that accumulates (+=) into
// the caller-supplied gradient tensors. Accumulation order inside each kernel
// is fixed (row-major, ascending inner index) so repeated runs are
// bit-identical.

// a[m x k] * b[k x n]
Tensor matmul(const Tensor& a, const Tensor& b);
void matmul_vjp(const Tensor& g, const Tensor& a, const Tensor& b, Tensor* ga, Tensor* gb);

Tensor transpose(const Tensor& a);

// x[c_in x ...], w[c_out x c_in], bias[c_out]; per-position linear map.
// Trailing extents of x are preserved.
Tensor conv1x1(const Tensor& x, const Tensor& w, const Tensor& bias);
void conv1x1_vjp(const Tensor& g, const Tensor& x, const Tensor& w, Tensor* gx, Tensor* gw,
                 Tensor* gbias);

// x[c_in x H x W], w[c_out x c_in x 3 x 3], bias[c_out], zero padding 1,
// stride 1 or 2; output spatial extents ceil(H/stride) x ceil(W/stride).
Tensor conv3x3(const Tensor& x, const Tensor& w, const Tensor& bias, int stride);
void conv3x3_vjp(const Tensor& g, const Tensor& x, const Tensor& w, int stride, Tensor* gx,
                 Tensor* gw, Tensor* gbias);

// align-corners-false bilinear resize by an integer factor
Tensor bilinear_upsample(const Tensor& x, int factor);
void bilinear_upsample_vjp(const Tensor& g, const Tensor& x, int factor, Tensor* gx);

Tensor relu(const Tensor& x);
void relu_vjp(const Tensor& g, const Tensor& x, Tensor* gx);

// per-row softmax with max subtraction
Tensor row_softmax(const Tensor& a);
void row_softmax_vjp(const Tensor& g, const Tensor& softmax_out, Tensor* ga);

// mean over positions of -log softmax probability of the true class;
// logits[K x ...], labels flattened over the trailing extents
double cross_entropy(const Tensor& logits, const std::vector<int>& labels);
void cross_entropy_vjp(double g, const Tensor& logits, const std::vector<int>& labels,
                       Tensor* glogits);

// alpha * q^T k with q, k of shape [c x L]; yields [L x L]
Tensor scaled_gram(const Tensor& q, const Tensor& k, double alpha);
void scaled_gram_vjp(const Tensor& g, const Tensor& q, const Tensor& k, double alpha,
                     Tensor* gq, Tensor* gk);

// concatenate along dim 0; all inputs share trailing extents
Tensor concat_channels(const std::vector<const Tensor*>& xs);
void concat_channels_vjp(const Tensor& g, const std::vector<const Tensor*>& xs,
                         const std::vector<Tensor*>& gxs);

// argmax over dim 0 per trailing position
std::vector<int> argmax_classes(const Tensor& logits);

}  // namespace hanet::ops
