#pragma once

#include <cstdint>
#include <vector>

#include "hanet/segnet.hpp"
#include "hanet/synth.hpp"

namespace hanet {

struct TrainOptions {
    int epochs = 30;
    double lr = 0.01;
    double momentum = 0.9;
    double weight_decay = 5e-4;
    uint64_t seed = 1;  // drives the per-epoch shuffle only
};

struct EpochLog {
    int epoch = 0;       // 1-based
    double mean_loss = 0.0;
    double val_mdice = 0.0;
};

struct TrainResult {
    std::vector<EpochLog> epochs;
    double best_mdice = 0.0;
    int best_epoch = 0;
};

// foreground classes {1..K-1}; the reported segmentation score everywhere
double eval_mdice(const SegNetParams& params, const SegNetConfig& cfg,
                  const std::vector<SegSample>& samples);

// Batch-1 SGD with momentum over shuffled epochs. Validates after every
// epoch and leaves the best-validation parameters in `params` on return.
// Throws NumericError on a non-finite loss.
TrainResult train(SegNetParams& params, const SegNetConfig& cfg,
                  const std::vector<SegSample>& train_set,
                  const std::vector<SegSample>& val_set, const TrainOptions& opts);

}  // namespace hanet
