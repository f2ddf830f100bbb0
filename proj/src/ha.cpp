#include "hanet/ha.hpp"

#include <algorithm>
#include <cmath>

#include "hanet/errors.hpp"

namespace hanet {

std::string ha_mode_name(HAMode mode) {
    return mode == HAMode::masked ? "masked" : "dense-power";
}

HAMode ha_mode_from_string(const std::string& s) {
    if (s == "masked") return HAMode::masked;
    if (s == "dense-power") return HAMode::dense_power;
    throw ConfigError("ha mode: expected \"masked\" or \"dense-power\", got \"" + s + "\"");
}

void HAConfig::validate() const {
    if (delta < 0.0 || delta > 1.0) {
        throw ConfigError("ha config: delta must be in [0,1], got " + std::to_string(delta));
    }
    if (n < 1) throw ConfigError("ha config: n must be >= 1, got " + std::to_string(n));
    if (c < 1) throw ConfigError("ha config: c must be >= 1, got " + std::to_string(c));
}

VarPtr init_weight(Rng& rng, std::vector<size_t> shape) {
    size_t fan_in = 1;
    for (size_t d = 1; d < shape.size(); ++d) fan_in *= shape[d];
    const double std_dev = std::sqrt(2.0 / static_cast<double>(fan_in));
    Tensor w(shape);
    for (size_t i = 0; i < w.size(); ++i) w[i] = rng.gaussian() * std_dev;
    return make_var(std::move(w));
}

VarPtr init_bias(size_t n) { return make_var(Tensor::zeros({n})); }

HAParams HAParams::init(Rng& rng, int c, int n) {
    const size_t cs = static_cast<size_t>(c);
    HAParams p;
    p.wq = init_weight(rng, {cs, cs});
    p.bq = init_bias(cs);
    p.wk = init_weight(rng, {cs, cs});
    p.bk = init_bias(cs);
    p.wh = init_weight(rng, {cs, cs});
    p.bh = init_bias(cs);
    for (int h = 0; h < n; ++h) {
        p.w_level.push_back(init_weight(rng, {cs, cs}));
        p.b_level.push_back(init_bias(cs));
    }
    p.w_fuse = init_weight(rng, {cs, cs * static_cast<size_t>(n)});
    p.b_fuse = init_bias(cs);
    return p;
}

std::vector<VarPtr> HAParams::all() const {
    std::vector<VarPtr> out{wq, bq, wk, bk, wh, bh};
    for (size_t h = 0; h < w_level.size(); ++h) {
        out.push_back(w_level[h]);
        out.push_back(b_level[h]);
    }
    out.push_back(w_fuse);
    out.push_back(b_fuse);
    return out;
}

Tensor dense_similarity(const Tensor& x, const HAParams& params) {
    const Tensor q = ops::conv1x1(x, params.wq->value, params.bq->value);
    const Tensor k = ops::conv1x1(x, params.wk->value, params.bk->value);
    const double alpha = 1.0 / std::sqrt(static_cast<double>(k.dim(0)));
    return ops::scaled_gram(q, k, alpha);
}

Tensor normalize_minmax(const Tensor& a_star) {
    double lo = a_star[0], hi = a_star[0];
    for (size_t i = 1; i < a_star.size(); ++i) {
        lo = std::min(lo, a_star[i]);
        hi = std::max(hi, a_star[i]);
    }
    Tensor out(a_star.shape());
    if (hi == lo) return out;  // degenerate constant map -> all zeros
    const double inv = 1.0 / (hi - lo);
    for (size_t i = 0; i < a_star.size(); ++i) out[i] = (a_star[i] - lo) * inv;
    return out;
}

Propagation attention_propagation(const Tensor& a_star, const Tensor& a_norm,
                                  const HAConfig& cfg) {
    if (cfg.mode != HAMode::masked) {
        throw ConfigError("attention_propagation: requires masked mode");
    }
    cfg.validate();
    const size_t L = a_star.dim(0);
    Propagation prop;
    const BoolAdjacency b1 = BoolAdjacency::from_threshold(a_norm, cfg.delta);
    BoolAdjacency cur = b1;
    for (int h = 1; h <= cfg.n; ++h) {
        if (h > 1) cur = bool_multiply(cur, b1);
        Tensor level({L, L});
        for (size_t i = 0; i < L; ++i)
            for (size_t j = 0; j < L; ++j)
                if (cur.get(i, j)) level.at2(i, j) = a_star.at2(i, j);
        prop.masks.push_back(cur);
        prop.level_maps.push_back(std::move(level));
    }
    return prop;
}

std::vector<Tensor> dense_power_propagation(const Tensor& a_star, const HAConfig& cfg) {
    cfg.validate();
    std::vector<Tensor> levels{a_star};
    for (int h = 2; h <= cfg.n; ++h)
        levels.push_back(ops::matmul(levels.back(), a_star));
    return levels;
}

Tensor masked_row_softmax(const Tensor& a, const BoolAdjacency& mask) {
    if (a.rank() != 2 || a.dim(0) != a.dim(1) || a.dim(0) != mask.size()) {
        throw DimensionError("masked_row_softmax: values " + a.shape_str() +
                             " vs mask size " + std::to_string(mask.size()));
    }
    const size_t L = a.dim(0);
    Tensor out({L, L});
    for (size_t i = 0; i < L; ++i) {
        const double* arow = a.data() + i * L;
        double* orow = out.data() + i * L;
        double mx = 0.0;
        bool any = false;
        for (size_t j = 0; j < L; ++j) {
            if (mask.get(i, j)) {
                mx = any ? std::max(mx, arow[j]) : arow[j];
                any = true;
            }
        }
        if (!any) {
            throw StateError("masked_row_softmax: row " + std::to_string(i) +
                             " fully masked; diagonal should be forced upstream");
        }
        double denom = 0.0;
        for (size_t j = 0; j < L; ++j) {
            if (mask.get(i, j)) {
                orow[j] = std::exp(arow[j] - mx);
                denom += orow[j];
            }
        }
        for (size_t j = 0; j < L; ++j) orow[j] /= denom;
    }
    return out;
}

Tensor aggregate(const Tensor& h_feat, const std::vector<Tensor>& a_levels,
                 const HAParams& params) {
    if (a_levels.size() != params.w_level.size()) {
        throw ConfigError("aggregate: " + std::to_string(a_levels.size()) +
                          " attention levels for " + std::to_string(params.w_level.size()) +
                          " level projections");
    }
    std::vector<Tensor> projected;
    projected.reserve(a_levels.size());
    for (size_t h = 0; h < a_levels.size(); ++h) {
        const Tensor mixed = ops::matmul(h_feat, a_levels[h]);
        projected.push_back(
            ops::conv1x1(mixed, params.w_level[h]->value, params.b_level[h]->value));
    }
    std::vector<const Tensor*> ptrs;
    for (const Tensor& t : projected) ptrs.push_back(&t);
    const Tensor stacked = ops::concat_channels(ptrs);
    return ops::conv1x1(stacked, params.w_fuse->value, params.b_fuse->value);
}

VarPtr masked_row_softmax(Tape& tape, const VarPtr& a, const BoolAdjacency& mask) {
    VarPtr out = make_var(masked_row_softmax(a->value, mask));
    // masked outputs are exactly 0, so the plain softmax VJP already routes
    // no gradient through them
    tape.record([out, a] { ops::row_softmax_vjp(out->grad, out->value, &a->grad); });
    return out;
}

VarPtr ha_forward(Tape& tape, const VarPtr& x, const HAParams& params, const HAConfig& cfg,
                  AttentionBundle* bundle_out) {
    cfg.validate();
    if (x->value.rank() != 2) {
        throw DimensionError("ha_forward: input must be [c x L], got " +
                             x->value.shape_str());
    }
    const VarPtr q = conv1x1(tape, x, params.wq, params.bq);
    const VarPtr k = conv1x1(tape, x, params.wk, params.bk);
    const double alpha = 1.0 / std::sqrt(static_cast<double>(k->value.dim(0)));
    const VarPtr a_star = scaled_gram(tape, q, k, alpha);
    const Tensor a_norm = normalize_minmax(a_star->value);
    const VarPtr h_feat = conv1x1(tape, x, params.wh, params.bh);

    std::vector<BoolAdjacency> masks;
    std::vector<VarPtr> att;
    if (cfg.mode == HAMode::masked) {
        const BoolAdjacency b1 = BoolAdjacency::from_threshold(a_norm, cfg.delta);
        BoolAdjacency cur = b1;
        for (int h = 1; h <= cfg.n; ++h) {
            if (h > 1) cur = bool_multiply(cur, b1);
            masks.push_back(cur);
            att.push_back(masked_row_softmax(tape, a_star, cur));
        }
    } else {
        VarPtr power = a_star;
        for (int h = 1; h <= cfg.n; ++h) {
            if (h > 1) power = matmul(tape, power, a_star);
            att.push_back(row_softmax(tape, power));
        }
    }

    std::vector<VarPtr> projected;
    for (int h = 0; h < cfg.n; ++h) {
        const VarPtr mixed = matmul(tape, h_feat, att[static_cast<size_t>(h)]);
        projected.push_back(conv1x1(tape, mixed, params.w_level[static_cast<size_t>(h)],
                                    params.b_level[static_cast<size_t>(h)]));
    }
    const VarPtr stacked = concat_channels(tape, projected);
    const VarPtr x_plus = conv1x1(tape, stacked, params.w_fuse, params.b_fuse);

    if (bundle_out) {
        bundle_out->a_star = a_star->value;
        bundle_out->a_norm = a_norm;
        bundle_out->masks = std::move(masks);
        bundle_out->a_levels.clear();
        for (const VarPtr& a : att) bundle_out->a_levels.push_back(a->value);
    }
    return x_plus;
}

std::pair<Tensor, AttentionBundle> ha_forward(const Tensor& x, const HAParams& params,
                                              const HAConfig& cfg) {
    Tape tape;
    AttentionBundle bundle;
    const VarPtr out = ha_forward(tape, make_var(x), params, cfg, &bundle);
    return {out->value, std::move(bundle)};
}

HARun ha_forward_retained(const Tensor& x, const HAParams& params, const HAConfig& cfg) {
    HARun run;
    run.x = make_var(x);
    run.x_plus = ha_forward(run.tape, run.x, params, cfg, &run.bundle);
    run.valid = true;
    return run;
}

void ha_backward(HARun& run, const Tensor& upstream) {
    if (!run.valid) throw StateError("ha_backward: no retained forward bundle");
    if (!upstream.same_shape(run.x_plus->value)) {
        throw DimensionError("ha_backward: upstream " + upstream.shape_str() +
                             " vs output " + run.x_plus->value.shape_str());
    }
    run.x_plus->grad = upstream;
    run.tape.backward();
    run.valid = false;
}

}  // namespace hanet
