#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hanet/graph.hpp"
#include "hanet/rng.hpp"
#include "hanet/tape.hpp"
#include "hanet/tensor.hpp"

namespace hanet {

enum class HAMode { masked, dense_power };

std::string ha_mode_name(HAMode mode);
HAMode ha_mode_from_string(const std::string& s);

struct HAConfig {
    double delta = 0.5;  // edge threshold on the [0,1]-normalized similarity
    int n = 2;           // highest attention level
    HAMode mode = HAMode::masked;
    int c = 32;          // channel width

    void validate() const;
};

// He-scaled gaussian weight (fan-in = product of trailing extents) and
// zero bias, shared by all parameter initializers
VarPtr init_weight(Rng& rng, std::vector<size_t> shape);
VarPtr init_bias(size_t n);

// All learnable tensors of the attention block. Projections q/k/h are 1x1
// convs c->c, each level has its own c->c projection, and the fuse layer maps
// the n*c concatenation back to c.
struct HAParams {
    VarPtr wq, bq;
    VarPtr wk, bk;
    VarPtr wh, bh;
    std::vector<VarPtr> w_level, b_level;
    VarPtr w_fuse, b_fuse;

    static HAParams init(Rng& rng, int c, int n);
    // canonical order: wq,bq,wk,bk,wh,bh, then per level w,b, then fuse w,b
    std::vector<VarPtr> all() const;
};

// Everything the forward pass derives from one input, kept for inspection,
// export and the backward pass.
struct AttentionBundle {
    Tensor a_star;                    // L x L raw similarity
    Tensor a_norm;                    // min-max normalized copy, threshold domain
    std::vector<BoolAdjacency> masks; // B^1..B^n (masked mode only)
    std::vector<Tensor> a_levels;     // row-stochastic attention per level
};

// --- pure value-level stages ---

// A* = alpha * Q^T K with alpha = 1/sqrt(c) taken from K's channel count
Tensor dense_similarity(const Tensor& x, const HAParams& params);

// global (a - min)/(max - min); constant map -> all zeros. Feeds only the
// threshold comparison, never the attention weights.
Tensor normalize_minmax(const Tensor& a_star);

struct Propagation {
    std::vector<BoolAdjacency> masks;  // B^1..B^n
    std::vector<Tensor> level_maps;    // A^h: a_star where masked in, 0 elsewhere
};
Propagation attention_propagation(const Tensor& a_star, const Tensor& a_norm,
                                  const HAConfig& cfg);

// A^h = (A*)^h by real matrix powers; comparison mode, no masking
std::vector<Tensor> dense_power_propagation(const Tensor& a_star, const HAConfig& cfg);

// softmax over unmasked entries only; masked entries exactly 0
Tensor masked_row_softmax(const Tensor& a, const BoolAdjacency& mask);

// X+ = fuse(concat over levels of W_level (H * A~level))
Tensor aggregate(const Tensor& h_feat, const std::vector<Tensor>& a_levels,
                 const HAParams& params);

std::pair<Tensor, AttentionBundle> ha_forward(const Tensor& x, const HAParams& params,
                                              const HAConfig& cfg);

// --- tape-recording forward, used inside larger networks ---

VarPtr masked_row_softmax(Tape& tape, const VarPtr& a, const BoolAdjacency& mask);
VarPtr ha_forward(Tape& tape, const VarPtr& x, const HAParams& params, const HAConfig& cfg,
                  AttentionBundle* bundle_out = nullptr);

// --- standalone forward/backward pair over one input ---

struct HARun {
    VarPtr x;        // gradient lands in x->grad
    VarPtr x_plus;
    AttentionBundle bundle;
    Tape tape;
    bool valid = false;
};

HARun ha_forward_retained(const Tensor& x, const HAParams& params, const HAConfig& cfg);
// seeds x_plus with the upstream gradient and replays the tape; one shot per
// forward (grads accumulate into params and run.x)
void ha_backward(HARun& run, const Tensor& upstream);

}  // namespace hanet
