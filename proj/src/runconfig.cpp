#include "hanet/runconfig.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>

#include "hanet/errors.hpp"

namespace hanet {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& scope,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
        throw ConfigError("config: \"" + scope + "\" must be an object");
    }
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError("config: unknown key \"" + item.key() + "\" in " + scope);
        }
    }
}

template <typename T>
void read_number(const json& j, const std::string& scope, const char* key, T& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) {
            throw ConfigError("config: \"" + scope + "." + key + "\" must be an integer");
        }
    } else {
        if (!v.is_number()) {
            throw ConfigError("config: \"" + scope + "." + key + "\" must be a number");
        }
    }
    out = v.get<T>();
}

void read_string(const json& j, const std::string& scope, const char* key,
                 std::string& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_string()) {
        throw ConfigError("config: \"" + scope + "." + key + "\" must be a string");
    }
    out = v.get<std::string>();
}

void read_bool(const json& j, const std::string& scope, const char* key, bool& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    if (!v.is_boolean()) {
        throw ConfigError("config: \"" + scope + "." + key + "\" must be a boolean");
    }
    out = v.get<bool>();
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig cfg;
    check_keys(j, "(top level)",
               {"task", "epochs", "seed", "output_dir", "ha", "model", "data", "train",
                "export"});
    std::string task_str = task_name(cfg.task);
    read_string(j, "(top level)", "task", task_str);
    cfg.task = task_from_string(task_str);
    read_number(j, "(top level)", "epochs", cfg.epochs);
    read_number(j, "(top level)", "seed", cfg.seed);
    read_string(j, "(top level)", "output_dir", cfg.output_dir);

    if (j.contains("ha")) {
        const json& h = j.at("ha");
        check_keys(h, "ha", {"delta", "n", "mode"});
        read_number(h, "ha", "delta", cfg.ha.delta);
        read_number(h, "ha", "n", cfg.ha.n);
        std::string mode = ha_mode_name(cfg.ha.mode);
        read_string(h, "ha", "mode", mode);
        cfg.ha.mode = ha_mode_from_string(mode);
    }
    if (j.contains("model")) {
        const json& m = j.at("model");
        check_keys(m, "model", {"c", "image"});
        read_number(m, "model", "c", cfg.c);
        read_number(m, "model", "image", cfg.image);
    }
    if (j.contains("data")) {
        const json& d = j.at("data");
        check_keys(d, "data",
                   {"train_samples", "test_samples", "contrast", "noise_sigma", "branches",
                    "thickness", "blob_noise"});
        read_number(d, "data", "train_samples", cfg.train_samples);
        read_number(d, "data", "test_samples", cfg.test_samples);
        read_number(d, "data", "contrast", cfg.data.contrast);
        read_number(d, "data", "noise_sigma", cfg.data.noise_sigma);
        read_number(d, "data", "branches", cfg.data.branches);
        read_number(d, "data", "thickness", cfg.data.thickness);
        read_number(d, "data", "blob_noise", cfg.data.blob_noise);
    }
    if (j.contains("train")) {
        const json& t = j.at("train");
        check_keys(t, "train", {"lr", "momentum", "weight_decay"});
        read_number(t, "train", "lr", cfg.lr);
        read_number(t, "train", "momentum", cfg.momentum);
        read_number(t, "train", "weight_decay", cfg.weight_decay);
    }
    if (j.contains("export")) {
        const json& e = j.at("export");
        check_keys(e, "export", {"attention", "graph"});
        read_bool(e, "export", "attention", cfg.export_attention);
        read_bool(e, "export", "graph", cfg.export_graph);
    }
    cfg.ha.c = cfg.c;
    cfg.validate();
    return cfg;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: invalid JSON in " + path + ": " + e.what());
    }
    return from_json(j);
}

void RunConfig::validate() const {
    if (epochs < 1) {
        throw ConfigError("config: \"epochs\" must be >= 1, got " + std::to_string(epochs));
    }
    if (train_samples < 1) throw ConfigError("config: \"data.train_samples\" must be >= 1");
    if (test_samples < 1) throw ConfigError("config: \"data.test_samples\" must be >= 1");
    if (output_dir.empty()) throw ConfigError("config: \"output_dir\" must be non-empty");
    if (!(lr >= 0.0) || !std::isfinite(lr)) {
        throw ConfigError("config: \"train.lr\" must be a finite non-negative number");
    }
    if (!(momentum >= 0.0) || momentum >= 1.0) {
        throw ConfigError("config: \"train.momentum\" must be in [0,1)");
    }
    if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) {
        throw ConfigError("config: \"train.weight_decay\" must be finite and >= 0");
    }
    segnet_config().validate();
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j;
    j["task"] = task_name(task);
    j["epochs"] = epochs;
    j["seed"] = seed;
    j["output_dir"] = output_dir;
    j["ha"] = {{"delta", ha.delta}, {"n", ha.n}, {"mode", ha_mode_name(ha.mode)}};
    j["model"] = {{"c", c}, {"image", image}, {"classes", task_classes(task)}};
    j["data"] = {{"train_samples", train_samples}, {"test_samples", test_samples},
                 {"contrast", data.contrast},      {"noise_sigma", data.noise_sigma},
                 {"branches", data.branches},      {"thickness", data.thickness},
                 {"blob_noise", data.blob_noise}};
    j["train"] = {{"lr", lr}, {"momentum", momentum}, {"weight_decay", weight_decay}};
    j["export"] = {{"attention", export_attention}, {"graph", export_graph}};
    j["seed_ranges"] = {
        {"train", {train_seed_base(), train_seed_base() + train_samples}},
        {"test", {test_seed_base(), test_seed_base() + test_samples}}};
    return j;
}

SegNetConfig RunConfig::segnet_config() const {
    SegNetConfig cfg;
    cfg.c_in = 1;
    cfg.c = c;
    cfg.classes = task_classes(task);
    cfg.image = image;
    cfg.ha = ha;
    cfg.ha.c = c;
    return cfg;
}

TrainOptions RunConfig::train_options() const {
    TrainOptions opts;
    opts.epochs = epochs;
    opts.lr = lr;
    opts.momentum = momentum;
    opts.weight_decay = weight_decay;
    opts.seed = seed;
    return opts;
}

CheckpointMeta RunConfig::checkpoint_meta() const {
    CheckpointMeta meta;
    meta.task = task;
    meta.cfg = segnet_config();
    meta.data = data;
    meta.seed = seed;
    meta.train_samples = train_samples;
    meta.test_samples = test_samples;
    return meta;
}

}  // namespace hanet
