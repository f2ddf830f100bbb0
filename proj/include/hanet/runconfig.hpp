#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "hanet/checkpoint.hpp"
#include "hanet/segnet.hpp"
#include "hanet/synth.hpp"
#include "hanet/trainer.hpp"

namespace hanet {

// One training run, as described by a JSON config file. Every key is
// optional (defaults below); unknown keys anywhere are rejected so typos in
// sweep configs fail loudly instead of silently training the default.
struct RunConfig {
    Task task = Task::disks;
    int epochs = 30;
    uint64_t seed = 1;
    std::string output_dir = "out";
    HAConfig ha;  // delta 0.5, n 2, masked; width synced with model.c
    int c = 32;
    int image = 64;
    uint32_t train_samples = 200;
    uint32_t test_samples = 50;
    DataParams data;
    double lr = 0.01;
    double momentum = 0.9;
    double weight_decay = 5e-4;
    bool export_attention = false;
    bool export_graph = false;

    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_json_file(const std::string& path);

    void validate() const;
    nlohmann::json to_json() const;  // resolved echo, including seed ranges

    SegNetConfig segnet_config() const;
    TrainOptions train_options() const;
    CheckpointMeta checkpoint_meta() const;
    uint64_t train_seed_base() const { return seed * 1000000ull; }
    uint64_t test_seed_base() const { return train_seed_base() + train_samples; }
};

}  // namespace hanet
