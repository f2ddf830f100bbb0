#include "hanet/trainer.hpp"

#include <cmath>
#include <numeric>
#include <utility>

#include "hanet/errors.hpp"
#include "hanet/metrics.hpp"
#include "hanet/optim.hpp"
#include "hanet/rng.hpp"

namespace hanet {

double eval_mdice(const SegNetParams& params, const SegNetConfig& cfg,
                  const std::vector<SegSample>& samples) {
    std::vector<int> fg_classes;
    for (int k = 1; k < cfg.classes; ++k) fg_classes.push_back(k);
    double total = 0.0;
    for (const SegSample& s : samples) {
        total += mdice(predict_mask(s.image, params, cfg), s.mask, fg_classes);
    }
    return total / static_cast<double>(samples.size());
}

TrainResult train(SegNetParams& params, const SegNetConfig& cfg,
                  const std::vector<SegSample>& train_set,
                  const std::vector<SegSample>& val_set, const TrainOptions& opts) {
    cfg.validate();
    if (train_set.empty()) throw DataError("train: empty training set");
    if (val_set.empty()) throw DataError("train: empty validation set");
    if (opts.epochs < 1) {
        throw ConfigError("train: epochs must be >= 1, got " + std::to_string(opts.epochs));
    }

    const std::vector<VarPtr> vars = params.all();
    std::vector<Tensor> velocity;
    velocity.reserve(vars.size());
    for (const VarPtr& v : vars) velocity.push_back(Tensor::zeros(v->value.shape()));

    Rng shuffle_rng(opts.seed);
    std::vector<size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), size_t{0});

    TrainResult result;
    std::vector<Tensor> best_values;
    for (int epoch = 1; epoch <= opts.epochs; ++epoch) {
        for (size_t i = order.size() - 1; i > 0; --i) {
            const size_t j = shuffle_rng.uniform_u64(i + 1);
            std::swap(order[i], order[j]);
        }
        double loss_sum = 0.0;
        for (const size_t idx : order) {
            const SegSample& sample = train_set[idx];
            Tape tape;
            const VarPtr logits = segnet_forward(tape, make_var(sample.image), params, cfg);
            const VarPtr loss = cross_entropy(tape, logits, sample.mask);
            if (!std::isfinite(loss->value[0])) {
                throw NumericError("train: non-finite loss at epoch " +
                                   std::to_string(epoch) + ", sample seed " +
                                   std::to_string(sample.seed));
            }
            loss_sum += loss->value[0];
            loss->grad[0] = 1.0;
            tape.backward();
            for (size_t p = 0; p < vars.size(); ++p) {
                sgd_step(*vars[p], opts.lr, opts.momentum, opts.weight_decay, velocity[p]);
            }
        }

        EpochLog log;
        log.epoch = epoch;
        log.mean_loss = loss_sum / static_cast<double>(train_set.size());
        log.val_mdice = eval_mdice(params, cfg, val_set);
        result.epochs.push_back(log);

        if (best_values.empty() || log.val_mdice > result.best_mdice) {
            result.best_mdice = log.val_mdice;
            result.best_epoch = epoch;
            best_values.clear();
            for (const VarPtr& v : vars) best_values.push_back(v->value);
        }
    }
    for (size_t p = 0; p < vars.size(); ++p) vars[p]->value = best_values[p];
    return result;
}

}  // namespace hanet
