#include "hanet/segnet.hpp"

#include "hanet/errors.hpp"
#include "hanet/ops.hpp"

namespace hanet {

void SegNetConfig::validate() const {
    if (c_in < 1) throw ConfigError("segnet config: c_in must be >= 1");
    if (classes < 2) {
        throw ConfigError("segnet config: classes must be >= 2, got " +
                          std::to_string(classes));
    }
    if (image < 4 || image % 4 != 0) {
        throw ConfigError("segnet config: image extent must be a positive multiple of 4, "
                          "got " +
                          std::to_string(image));
    }
    if (c != ha.c) {
        throw ConfigError("segnet config: width " + std::to_string(c) +
                          " does not match attention width " + std::to_string(ha.c));
    }
    ha.validate();
}

SegNetParams SegNetParams::init(Rng& rng, const SegNetConfig& cfg) {
    cfg.validate();
    const auto u = [](int v) { return static_cast<size_t>(v); };
    const size_t w1 = u(cfg.w1()), w2 = u(cfg.w2()), c = u(cfg.c);
    SegNetParams p;
    p.enc1_w = init_weight(rng, {w1, u(cfg.c_in), 3, 3});
    p.enc1_b = init_bias(w1);
    p.enc2_w = init_weight(rng, {w2, w1, 3, 3});
    p.enc2_b = init_bias(w2);
    p.enc3_w = init_weight(rng, {c, w2, 3, 3});
    p.enc3_b = init_bias(c);
    p.encb_w = init_weight(rng, {c, c});
    p.encb_b = init_bias(c);
    p.ha = HAParams::init(rng, cfg.c, cfg.ha.n);
    p.decb_w = init_weight(rng, {c, c});
    p.decb_b = init_bias(c);
    p.dec_w = init_weight(rng, {w2, c + w2, 3, 3});
    p.dec_b = init_bias(w2);
    p.head_w = init_weight(rng, {u(cfg.classes), w2});
    p.head_b = init_bias(u(cfg.classes));
    return p;
}

std::vector<VarPtr> SegNetParams::all() const {
    std::vector<VarPtr> out{enc1_w, enc1_b, enc2_w, enc2_b, enc3_w, enc3_b, encb_w, encb_b};
    for (const VarPtr& v : ha.all()) out.push_back(v);
    out.insert(out.end(), {decb_w, decb_b, dec_w, dec_b, head_w, head_b});
    return out;
}

EncodeOut encode(Tape& tape, const VarPtr& img, const SegNetParams& p,
                 const SegNetConfig& cfg) {
    const Tensor& v = img->value;
    if (v.rank() != 3 || v.dim(0) != static_cast<size_t>(cfg.c_in) ||
        v.dim(1) != static_cast<size_t>(cfg.image) ||
        v.dim(2) != static_cast<size_t>(cfg.image)) {
        throw DimensionError("encode: input " + v.shape_str() + " does not match config [" +
                             std::to_string(cfg.c_in) + "x" + std::to_string(cfg.image) +
                             "x" + std::to_string(cfg.image) + "]");
    }
    const VarPtr e1 = relu(tape, conv3x3(tape, img, p.enc1_w, p.enc1_b, 1));
    const VarPtr low = relu(tape, conv3x3(tape, e1, p.enc2_w, p.enc2_b, 2));
    const VarPtr e3 = relu(tape, conv3x3(tape, low, p.enc3_w, p.enc3_b, 2));
    const VarPtr deep = relu(tape, conv1x1(tape, e3, p.encb_w, p.encb_b));
    return {low, deep};
}

VarPtr decode(Tape& tape, const VarPtr& x_plus, const VarPtr& low_level,
              const SegNetParams& p, const SegNetConfig& cfg) {
    (void)cfg;
    const VarPtr d1 = relu(tape, conv1x1(tape, x_plus, p.decb_w, p.decb_b));
    const VarPtr up = bilinear_upsample(tape, d1, 2);
    const VarPtr cat = concat_channels(tape, {up, low_level});
    const VarPtr d2 = relu(tape, conv3x3(tape, cat, p.dec_w, p.dec_b, 1));
    const VarPtr logits_small = conv1x1(tape, d2, p.head_w, p.head_b);
    return bilinear_upsample(tape, logits_small, 2);
}

VarPtr segnet_forward(Tape& tape, const VarPtr& img, const SegNetParams& p,
                      const SegNetConfig& cfg, AttentionBundle* bundle_out) {
    const EncodeOut enc = encode(tape, img, p, cfg);
    const size_t g = static_cast<size_t>(cfg.grid());
    const VarPtr flat = reshape(tape, enc.deep, {static_cast<size_t>(cfg.c), g * g});
    const VarPtr x_plus = ha_forward(tape, flat, p.ha, cfg.ha, bundle_out);
    const VarPtr grid = reshape(tape, x_plus, {static_cast<size_t>(cfg.c), g, g});
    return decode(tape, grid, enc.low_level, p, cfg);
}

Tensor segnet_infer(const Tensor& img, const SegNetParams& p, const SegNetConfig& cfg,
                    AttentionBundle* bundle_out) {
    Tape tape;
    return segnet_forward(tape, make_var(img), p, cfg, bundle_out)->value;
}

std::vector<int> predict_mask(const Tensor& img, const SegNetParams& p,
                              const SegNetConfig& cfg) {
    return ops::argmax_classes(segnet_infer(img, p, cfg));
}

}  // namespace hanet
