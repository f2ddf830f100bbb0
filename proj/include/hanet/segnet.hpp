#pragma once

#include <algorithm>
#include <vector>

#include "hanet/ha.hpp"
#include "hanet/rng.hpp"
#include "hanet/tape.hpp"
#include "hanet/tensor.hpp"

namespace hanet {

// Desk-scale encoder-decoder around the attention block. Two stride-2
// stages put the attention at 1/4 resolution; a single skip from the first
// stride-2 stage feeds the decoder.
struct SegNetConfig {
    int c_in = 1;
    int c = 32;      // attention width
    int classes = 3;
    int image = 64;  // square input extent
    HAConfig ha;

    int w1() const { return std::max(2, c / 4); }  // encoder stage widths
    int w2() const { return std::max(2, c / 2); }
    int grid() const { return image / 4; }         // attention grid extent
    void validate() const;
};

struct SegNetParams {
    VarPtr enc1_w, enc1_b;  // 3x3, c_in -> w1, stride 1
    VarPtr enc2_w, enc2_b;  // 3x3, w1 -> w2, stride 2 (skip tap)
    VarPtr enc3_w, enc3_b;  // 3x3, w2 -> c, stride 2
    VarPtr encb_w, encb_b;  // 1x1 bottleneck, c -> c
    HAParams ha;
    VarPtr decb_w, decb_b;  // 1x1 bottleneck, c -> c
    VarPtr dec_w, dec_b;    // 3x3, (c+w2) -> w2
    VarPtr head_w, head_b;  // 1x1, w2 -> classes, no activation

    static SegNetParams init(Rng& rng, const SegNetConfig& cfg);
    // canonical order, also the checkpoint layout
    std::vector<VarPtr> all() const;
};

struct EncodeOut {
    VarPtr low_level;  // [w2 x H/2 x W/2]
    VarPtr deep;       // [c x H/4 x W/4]
};

EncodeOut encode(Tape& tape, const VarPtr& img, const SegNetParams& p,
                 const SegNetConfig& cfg);
VarPtr decode(Tape& tape, const VarPtr& x_plus, const VarPtr& low_level,
              const SegNetParams& p, const SegNetConfig& cfg);

// full pipeline: encode -> attention over flattened grid -> decode
VarPtr segnet_forward(Tape& tape, const VarPtr& img, const SegNetParams& p,
                      const SegNetConfig& cfg, AttentionBundle* bundle_out = nullptr);

Tensor segnet_infer(const Tensor& img, const SegNetParams& p, const SegNetConfig& cfg,
                    AttentionBundle* bundle_out = nullptr);
std::vector<int> predict_mask(const Tensor& img, const SegNetParams& p,
                              const SegNetConfig& cfg);

}  // namespace hanet
