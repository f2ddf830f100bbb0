#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hanet/checkpoint.hpp"
#include "hanet/errors.hpp"
#include "hanet/metrics.hpp"
#include "hanet/pnm.hpp"
#include "hanet/runconfig.hpp"
#include "hanet/segnet.hpp"
#include "hanet/synth.hpp"
#include "hanet/trainer.hpp"

namespace fs = std::filesystem;
using namespace hanet;

namespace {

// fixed formatting so repeated runs produce byte-identical CSV files
std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void make_dirs(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output dir " + dir + ": " + ec.message());
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    return out;
}

struct TrainedRun {
    SegNetConfig net_cfg;
    SegNetParams params;
    TrainResult result;
    std::vector<SegSample> test_set;
};

TrainedRun run_training(const RunConfig& cfg) {
    TrainedRun run;
    run.net_cfg = cfg.segnet_config();
    run.net_cfg.validate();
    const size_t H = static_cast<size_t>(cfg.image);
    const auto train_set =
        gen_dataset(cfg.task, cfg.train_seed_base(), cfg.train_samples, H, cfg.data);
    run.test_set = gen_dataset(cfg.task, cfg.test_seed_base(), cfg.test_samples, H, cfg.data);
    Rng rng(cfg.seed);
    run.params = SegNetParams::init(rng, run.net_cfg);
    run.result = train(run.params, run.net_cfg, train_set, run.test_set,
                       cfg.train_options());
    return run;
}

void export_attention_files(const std::string& dir, const SegNetConfig& net_cfg,
                            const SegNetParams& params, const SegSample& sample,
                            size_t row, size_t col, bool maps, bool graph) {
    AttentionBundle bundle;
    segnet_infer(sample.image, params, net_cfg, &bundle);
    const size_t grid = static_cast<size_t>(net_cfg.grid());
    const size_t query = (row / 4) * grid + (col / 4);
    if (maps) {
        for (size_t h = 0; h < bundle.a_levels.size(); ++h) {
            write_attention_pgm(dir + "/attn_h" + std::to_string(h + 1) + ".pgm",
                                bundle.a_levels[h], query, grid, grid);
        }
    }
    if (graph) {
        if (bundle.masks.empty()) {
            std::cout << "note: dense-power mode has no graph; skipping graph_b1.pbm\n";
        } else {
            write_pbm(dir + "/graph_b1.pbm", bundle.masks[0]);
        }
    }
}

void write_train_outputs(const RunConfig& cfg, const TrainedRun& run) {
    make_dirs(cfg.output_dir);
    {
        auto m = open_out(cfg.output_dir + "/metrics.csv");
        m << "epoch,loss,mdice\n";
        for (const EpochLog& e : run.result.epochs) {
            m << e.epoch << "," << fmt(e.mean_loss) << "," << fmt(e.val_mdice) << "\n";
        }
    }
    save_checkpoint(cfg.output_dir + "/checkpoint.hant", cfg.checkpoint_meta(), run.params);
    {
        auto r = open_out(cfg.output_dir + "/run.json");
        r << cfg.to_json().dump(2) << "\n";
    }
    if (cfg.export_attention || cfg.export_graph) {
        const SegSample& sample = run.test_set.front();
        const size_t mid = static_cast<size_t>(cfg.image) / 2;
        export_attention_files(cfg.output_dir, run.net_cfg, run.params, sample, mid, mid,
                               cfg.export_attention, cfg.export_graph);
    }
}

int cmd_train(const std::string& config_path) {
    const RunConfig cfg = RunConfig::from_json_file(config_path);
    const TrainedRun run = run_training(cfg);
    write_train_outputs(cfg, run);
    std::cout << "train: task " << task_name(cfg.task) << ", " << cfg.epochs
              << " epochs, best test mdice " << fmt(run.result.best_mdice) << " at epoch "
              << run.result.best_epoch << "\n"
              << "train: outputs in " << cfg.output_dir << "\n";
    return 0;
}

int cmd_eval(const std::string& ckpt_path, const std::string& task_override,
             int64_t seed_start, int64_t count, const std::string& out_dir) {
    auto [meta, params] = load_checkpoint(ckpt_path);
    if (!task_override.empty() && task_from_string(task_override) != meta.task) {
        throw ConfigError("eval: checkpoint was trained on task \"" + task_name(meta.task) +
                          "\", requested \"" + task_override + "\"");
    }
    const uint64_t start =
        seed_start >= 0 ? static_cast<uint64_t>(seed_start) : meta.test_seed_base();
    const size_t n = count >= 0 ? static_cast<size_t>(count) : meta.test_samples;
    if (n == 0) throw ConfigError("eval: empty seed range");

    const auto samples =
        gen_dataset(meta.task, start, n, static_cast<size_t>(meta.cfg.image), meta.data);
    const int K = meta.cfg.classes;

    const double md = eval_mdice(params, meta.cfg, samples);
    std::vector<double> dice_sum(static_cast<size_t>(K), 0.0);
    double cdr_sum = 0.0, acc = 0.0, f1 = 0.0, se = 0.0, sp = 0.0, iou = 0.0;
    for (const SegSample& s : samples) {
        const std::vector<int> pred = predict_mask(s.image, params, meta.cfg);
        for (int k = 1; k < K; ++k) dice_sum[static_cast<size_t>(k)] += dice(pred, s.mask, k);
        if (meta.task == Task::disks) {
            cdr_sum += cdr_error(pred, s.mask, static_cast<size_t>(meta.cfg.image),
                                 static_cast<size_t>(meta.cfg.image));
        }
        const BinaryStats b = binary_stats(pred, s.mask);
        acc += b.acc;
        f1 += b.f1;
        se += b.se;
        sp += b.sp;
        iou += b.iou;
    }
    const double inv = 1.0 / static_cast<double>(samples.size());

    std::vector<std::pair<std::string, double>> rows;
    rows.emplace_back("samples", static_cast<double>(samples.size()));
    rows.emplace_back("mdice", md);
    for (int k = 1; k < K; ++k) {
        rows.emplace_back("dice_c" + std::to_string(k),
                          dice_sum[static_cast<size_t>(k)] * inv);
    }
    if (meta.task == Task::disks) rows.emplace_back("e_cdr", cdr_sum * inv);
    rows.emplace_back("acc", acc * inv);
    rows.emplace_back("f1", f1 * inv);
    rows.emplace_back("se", se * inv);
    rows.emplace_back("sp", sp * inv);
    rows.emplace_back("iou", iou * inv);

    make_dirs(out_dir);
    auto csv = open_out(out_dir + "/eval.csv");
    csv << "metric,value\n";
    std::cout << "eval: task " << task_name(meta.task) << ", seeds [" << start << ","
              << start + n << ")\n";
    for (const auto& [name, value] : rows) {
        csv << name << "," << fmt(value) << "\n";
        std::printf("  %-8s %.6f\n", name.c_str(), value);
    }
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::vector<double>& deltas,
              const std::vector<int>& ns) {
    if (deltas.empty() || ns.empty()) {
        throw ConfigError("sweep: --deltas and --ns must be non-empty");
    }
    const RunConfig base = RunConfig::from_json_file(config_path);
    make_dirs(base.output_dir);

    // every cell shares the same dataset and the same pre-training similarity
    // map (Q/K draws precede the level-count-dependent ones), so the edge
    // column reflects delta alone
    const SegNetConfig ref_cfg = base.segnet_config();
    Rng ref_rng(base.seed);
    const SegNetParams ref_params = SegNetParams::init(ref_rng, ref_cfg);
    const SegSample ref_sample = gen_sample(base.task, base.train_seed_base(),
                                            static_cast<size_t>(base.image), base.data);
    AttentionBundle ref_bundle;
    segnet_infer(ref_sample.image, ref_params, ref_cfg, &ref_bundle);

    auto csv = open_out(base.output_dir + "/sweep.csv");
    csv << "delta,n,status,mdice,edges_b1\n";
    for (const double delta : deltas) {
        for (const int n : ns) {
            RunConfig cell = base;
            cell.ha.delta = delta;
            cell.ha.n = n;
            char cell_name[64];
            std::snprintf(cell_name, sizeof cell_name, "d%g_n%d", delta, n);
            cell.output_dir = base.output_dir + "/" + cell_name;

            std::string status = "ok", mdice_str, edges_str;
            try {
                const size_t edges =
                    BoolAdjacency::from_threshold(ref_bundle.a_norm, delta).edge_count();
                edges_str = std::to_string(edges);
                const TrainedRun run = run_training(cell);
                write_train_outputs(cell, run);
                mdice_str = fmt(run.result.best_mdice);
            } catch (const ConfigError& e) {
                status = "config-error";
                std::cerr << "sweep cell " << cell_name << ": " << e.what() << "\n";
            } catch (const DataError& e) {
                status = "data-error";
                std::cerr << "sweep cell " << cell_name << ": " << e.what() << "\n";
            } catch (const NumericError& e) {
                status = "numeric-error";
                std::cerr << "sweep cell " << cell_name << ": " << e.what() << "\n";
            }
            csv << fmt(delta) << "," << n << "," << status << "," << mdice_str << ","
                << edges_str << "\n";
            std::cout << "sweep: delta=" << delta << " n=" << n << " -> " << status
                      << (mdice_str.empty() ? "" : (", mdice " + mdice_str)) << "\n";
        }
    }
    std::cout << "sweep: wrote " << base.output_dir << "/sweep.csv\n";
    return 0;
}

int cmd_export_attention(const std::string& ckpt_path, uint64_t sample_seed, int64_t row,
                         int64_t col, const std::string& out_dir) {
    auto [meta, params] = load_checkpoint(ckpt_path);
    if (row < 0 || col < 0 || row >= meta.cfg.image || col >= meta.cfg.image) {
        throw ConfigError("export-attention: pixel (" + std::to_string(row) + "," +
                          std::to_string(col) + ") out of range for image extent " +
                          std::to_string(meta.cfg.image));
    }
    const SegSample sample =
        gen_sample(meta.task, sample_seed, static_cast<size_t>(meta.cfg.image), meta.data);
    make_dirs(out_dir);
    export_attention_files(out_dir, meta.cfg, params, sample, static_cast<size_t>(row),
                           static_cast<size_t>(col), true, true);
    std::cout << "export-attention: wrote " << meta.cfg.ha.n << " level map(s) to "
              << out_dir << "\n";
    return 0;
}

int cmd_gen_data(const std::string& task_str, uint64_t seed_start, int64_t count,
                 int64_t image, const std::string& out_dir, const DataParams& data) {
    if (count < 1) throw ConfigError("gen-data: --count must be >= 1");
    if (image < 4 || image % 4 != 0) {
        throw ConfigError("gen-data: --image must be a positive multiple of 4");
    }
    const Task task = task_from_string(task_str);
    const int K = task_classes(task);
    make_dirs(out_dir);
    const size_t H = static_cast<size_t>(image);
    for (int64_t i = 0; i < count; ++i) {
        const SegSample s = gen_sample(task, seed_start + static_cast<uint64_t>(i), H, data);
        std::vector<uint8_t> img_px(H * H), mask_px(H * H);
        for (size_t p = 0; p < H * H; ++p) {
            img_px[p] = static_cast<uint8_t>(std::lround(s.image[p] * 255.0));
            mask_px[p] = static_cast<uint8_t>(s.mask[p] * 255 / (K - 1));
        }
        char name[64];
        std::snprintf(name, sizeof name, "/sample_%04lld_img.pgm",
                      static_cast<long long>(i));
        write_pgm(out_dir + name, img_px, H, H);
        std::snprintf(name, sizeof name, "/sample_%04lld_mask.pgm",
                      static_cast<long long>(i));
        write_pgm(out_dir + name, mask_px, H, H);
    }
    std::cout << "gen-data: wrote " << count << " " << task_str << " sample pair(s) to "
              << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hierarchical-attention segmentation workbench"};
    app.require_subcommand(1);

    std::string train_config;
    auto* train_cmd = app.add_subcommand("train", "train a model from a JSON config");
    train_cmd->add_option("--config", train_config, "JSON config path")->required();

    std::string eval_ckpt, eval_task, eval_dir = ".";
    int64_t eval_seed_start = -1, eval_count = -1;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on generated data");
    eval_cmd->add_option("--checkpoint", eval_ckpt, "checkpoint path")->required();
    eval_cmd->add_option("--task", eval_task, "must match the checkpoint task");
    eval_cmd->add_option("--seed-start", eval_seed_start,
                         "first sample seed (default: the checkpoint's test split)");
    eval_cmd->add_option("--count", eval_count, "number of samples");
    eval_cmd->add_option("--output-dir", eval_dir, "where eval.csv goes");

    std::string sweep_config;
    std::vector<double> sweep_deltas;
    std::vector<int> sweep_ns;
    auto* sweep_cmd = app.add_subcommand("sweep", "train a delta x n grid");
    sweep_cmd->add_option("--config", sweep_config, "JSON config path")->required();
    sweep_cmd->add_option("--deltas", sweep_deltas, "comma-separated thresholds")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--ns", sweep_ns, "comma-separated level counts")
        ->required()
        ->delimiter(',');

    std::string exp_ckpt, exp_dir = ".";
    uint64_t exp_seed = 0;
    int64_t exp_row = 0, exp_col = 0;
    auto* exp_cmd =
        app.add_subcommand("export-attention", "dump one pixel's attention maps as PGM");
    exp_cmd->add_option("--checkpoint", exp_ckpt, "checkpoint path")->required();
    exp_cmd->add_option("--sample-seed", exp_seed, "seed of the sample to visualize");
    exp_cmd->add_option("--row", exp_row, "query pixel row")->required();
    exp_cmd->add_option("--col", exp_col, "query pixel column")->required();
    exp_cmd->add_option("--output-dir", exp_dir, "output directory");

    std::string gen_task, gen_dir;
    uint64_t gen_seed_start = 0;
    int64_t gen_count = 10, gen_image = 64;
    DataParams gen_params;
    auto* gen_cmd = app.add_subcommand("gen-data", "dump synthetic samples as PGM pairs");
    gen_cmd->add_option("--task", gen_task, "disks|vessels|blobs")->required();
    gen_cmd->add_option("--seed-start", gen_seed_start, "first sample seed");
    gen_cmd->add_option("--count", gen_count, "number of samples");
    gen_cmd->add_option("--image", gen_image, "square image extent");
    gen_cmd->add_option("--output-dir", gen_dir, "output directory")->required();
    gen_cmd->add_option("--contrast", gen_params.contrast, "disks: class separation");
    gen_cmd->add_option("--noise-sigma", gen_params.noise_sigma, "disks: noise level");
    gen_cmd->add_option("--branches", gen_params.branches, "vessels: stroke count");
    gen_cmd->add_option("--thickness", gen_params.thickness, "vessels: stroke thickness");
    gen_cmd->add_option("--blob-noise", gen_params.blob_noise, "blobs: noise level");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (train_cmd->parsed()) return cmd_train(train_config);
        if (eval_cmd->parsed()) {
            return cmd_eval(eval_ckpt, eval_task, eval_seed_start, eval_count, eval_dir);
        }
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_config, sweep_deltas, sweep_ns);
        if (exp_cmd->parsed()) {
            return cmd_export_attention(exp_ckpt, exp_seed, exp_row, exp_col, exp_dir);
        }
        if (gen_cmd->parsed()) {
            return cmd_gen_data(gen_task, gen_seed_start, gen_count, gen_image, gen_dir,
                                gen_params);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
