#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "hanet/segnet.hpp"
#include "hanet/synth.hpp"

namespace hanet {

// Everything needed to rebuild the model and regenerate its data splits:
// the dataset base seed is seed * 1e6, train seeds come first, test seeds
// follow immediately after.
struct CheckpointMeta {
    Task task = Task::disks;
    SegNetConfig cfg;
    DataParams data;
    uint64_t seed = 1;
    uint32_t train_samples = 200;
    uint32_t test_samples = 50;

    uint64_t train_seed_base() const { return seed * 1000000ull; }
    uint64_t test_seed_base() const { return train_seed_base() + train_samples; }
};

// Little-endian binary: magic "HANT", version u32, meta block, parameter
// count u32, then each tensor as rank u32, extents u32..., f64 payload.
void save_checkpoint(const std::string& path, const CheckpointMeta& meta,
                     const SegNetParams& params);
std::pair<CheckpointMeta, SegNetParams> load_checkpoint(const std::string& path);

}  // namespace hanet
