#include "hanet/tape.hpp"

namespace hanet {

VarPtr make_var(Tensor value) {
    auto var = std::make_shared<GradPair>();
    var->grad = Tensor::zeros(value.shape());
    var->value = std::move(value);
    return var;
}

VarPtr matmul(Tape& tape, const VarPtr& a, const VarPtr& b) {
    VarPtr out = make_var(ops::matmul(a->value, b->value));
    tape.record([out, a, b] {
        ops::matmul_vjp(out->grad, a->value, b->value, &a->grad, &b->grad);
    });
    return out;
}

VarPtr conv1x1(Tape& tape, const VarPtr& x, const VarPtr& w, const VarPtr& bias) {
    VarPtr out = make_var(ops::conv1x1(x->value, w->value, bias->value));
    tape.record([out, x, w, bias] {
        ops::conv1x1_vjp(out->grad, x->value, w->value, &x->grad, &w->grad, &bias->grad);
    });
    return out;
}

VarPtr conv3x3(Tape& tape, const VarPtr& x, const VarPtr& w, const VarPtr& bias, int stride) {
    VarPtr out = make_var(ops::conv3x3(x->value, w->value, bias->value, stride));
    tape.record([out, x, w, bias, stride] {
        ops::conv3x3_vjp(out->grad, x->value, w->value, stride, &x->grad, &w->grad,
                         &bias->grad);
    });
    return out;
}

VarPtr bilinear_upsample(Tape& tape, const VarPtr& x, int factor) {
    VarPtr out = make_var(ops::bilinear_upsample(x->value, factor));
    tape.record([out, x, factor] {
        ops::bilinear_upsample_vjp(out->grad, x->value, factor, &x->grad);
    });
    return out;
}

VarPtr relu(Tape& tape, const VarPtr& x) {
    VarPtr out = make_var(ops::relu(x->value));
    tape.record([out, x] { ops::relu_vjp(out->grad, x->value, &x->grad); });
    return out;
}

VarPtr row_softmax(Tape& tape, const VarPtr& a) {
    VarPtr out = make_var(ops::row_softmax(a->value));
    tape.record([out, a] { ops::row_softmax_vjp(out->grad, out->value, &a->grad); });
    return out;
}

VarPtr scaled_gram(Tape& tape, const VarPtr& q, const VarPtr& k, double alpha) {
    VarPtr out = make_var(ops::scaled_gram(q->value, k->value, alpha));
    tape.record([out, q, k, alpha] {
        ops::scaled_gram_vjp(out->grad, q->value, k->value, alpha, &q->grad, &k->grad);
    });
    return out;
}

VarPtr concat_channels(Tape& tape, const std::vector<VarPtr>& xs) {
    std::vector<const Tensor*> values;
    values.reserve(xs.size());
    for (const VarPtr& x : xs) values.push_back(&x->value);
    VarPtr out = make_var(ops::concat_channels(values));
    tape.record([out, xs] {
        std::vector<const Tensor*> vals;
        std::vector<Tensor*> grads;
        vals.reserve(xs.size());
        grads.reserve(xs.size());
        for (const VarPtr& x : xs) {
            vals.push_back(&x->value);
            grads.push_back(&x->grad);
        }
        ops::concat_channels_vjp(out->grad, vals, grads);
    });
    return out;
}

VarPtr reshape(Tape& tape, const VarPtr& x, std::vector<size_t> shape) {
    VarPtr out = make_var(x->value.reshaped(std::move(shape)));
    tape.record([out, x] {
        for (size_t i = 0; i < x->grad.size(); ++i) x->grad[i] += out->grad[i];
    });
    return out;
}

VarPtr cross_entropy(Tape& tape, const VarPtr& logits, std::vector<int> labels) {
    const double loss = ops::cross_entropy(logits->value, labels);
    VarPtr out = make_var(Tensor({1}, {loss}));
    tape.record([out, logits, labels = std::move(labels)] {
        ops::cross_entropy_vjp(out->grad[0], logits->value, labels, &logits->grad);
    });
    return out;
}

}  // namespace hanet
