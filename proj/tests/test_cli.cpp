#include <doctest.h>

#include <sys/wait.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hanet/pnm.hpp"

namespace fs = std::filesystem;

namespace {

struct CmdResult {
    int code = -1;
    std::string output;
};

int cli_counter = 0;

CmdResult run_cli(const std::string& args) {
    const fs::path outfile =
        fs::temp_directory_path() / ("hanet_cli_out_" + std::to_string(cli_counter++) + ".txt");
    const std::string cmd =
        std::string(HANET_CLI_PATH) + " " + args + " > " + outfile.string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    CmdResult res;
    res.code = (rc == -1) ? -1 : WEXITSTATUS(rc);
    std::ifstream in(outfile);
    std::stringstream ss;
    ss << in.rdbuf();
    res.output = ss.str();
    fs::remove(outfile);
    return res;
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "hanet_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string write_config(const fs::path& dir, const std::string& body) {
    fs::path p = dir / "config.json";
    std::ofstream out(p);
    out << body;
    return p.string();
}

// minimal fast config: blobs at 16x16, 4 train / 2 test samples
std::string tiny_config_json(const std::string& output_dir, const std::string& extra = "") {
    return std::string("{\n") + "  \"task\": \"blobs\",\n  \"epochs\": 2,\n  \"seed\": 5,\n" +
           "  \"output_dir\": \"" + output_dir + "\",\n" +
           "  \"model\": {\"c\": 4, \"image\": 16},\n" +
           "  \"data\": {\"train_samples\": 4, \"test_samples\": 2},\n" +
           "  \"ha\": {\"delta\": 0.5, \"n\": 2}" + (extra.empty() ? "" : ",\n" + extra) +
           "\n}\n";
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

double best_mdice_from_metrics(const fs::path& metrics_csv) {
    auto rows = read_csv(metrics_csv);
    REQUIRE(rows.size() >= 2);
    double best = -1.0;
    for (size_t i = 1; i < rows.size(); ++i) best = std::max(best, std::stod(rows[i][2]));
    return best;
}

double eval_value(const fs::path& eval_csv, const std::string& metric) {
    for (const auto& row : read_csv(eval_csv)) {
        if (row.size() == 2 && row[0] == metric) return std::stod(row[1]);
    }
    FAIL("metric not found: " << metric);
    return 0.0;
}

}  // namespace

TEST_CASE("cli rejects missing subcommands and accepts --help") {
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("frobnicate").code == 2);
}

TEST_CASE("gen-data writes readable image/mask pairs") {
    fs::path dir = fresh_dir("gen_data");
    CmdResult r = run_cli("gen-data --task blobs --count 3 --image 16 --output-dir " +
                          (dir / "out").string());
    CHECK(r.code == 0);
    for (int i = 0; i < 3; ++i) {
        char img[32], mask[32];
        std::snprintf(img, sizeof img, "sample_%04d_img.pgm", i);
        std::snprintf(mask, sizeof mask, "sample_%04d_mask.pgm", i);
        CHECK(fs::exists(dir / "out" / img));
        CHECK(fs::exists(dir / "out" / mask));
        hanet::PgmImage pg = hanet::read_pgm((dir / "out" / img).string());
        CHECK(pg.height == 16);
        CHECK(pg.width == 16);
    }
}

TEST_CASE("gen-data validates its arguments") {
    fs::path dir = fresh_dir("gen_data_bad");
    CHECK(run_cli("gen-data --task optic --count 1 --output-dir " + dir.string()).code == 2);
    CHECK(run_cli("gen-data --task blobs --count 0 --output-dir " + dir.string()).code == 2);
    CHECK(run_cli("gen-data --task blobs --count 1 --image 15 --output-dir " + dir.string())
              .code == 2);
    CHECK(run_cli("gen-data --task blobs --count 1").code == 2);  // missing required option
}

TEST_CASE("train produces metrics, checkpoint and config echo") {
    fs::path dir = fresh_dir("train_basic");
    std::string cfg = write_config(dir, tiny_config_json((dir / "run").string()));
    CmdResult r = run_cli("train --config " + cfg);
    CHECK(r.code == 0);
    CHECK(r.output.find("best test mdice") != std::string::npos);

    auto rows = read_csv(dir / "run" / "metrics.csv");
    REQUIRE(rows.size() == 3);  // header + 2 epochs
    CHECK(rows[0] == std::vector<std::string>{"epoch", "loss", "mdice"});
    CHECK(rows[1][0] == "1");
    CHECK(rows[2][0] == "2");

    CHECK(fs::exists(dir / "run" / "checkpoint.hant"));
    std::string run_json = slurp(dir / "run" / "run.json");
    CHECK(run_json.find("\"seed_ranges\"") != std::string::npos);
    CHECK(run_json.find("\"task\": \"blobs\"") != std::string::npos);
}

TEST_CASE("identical train invocations are byte-identical") {
    fs::path dir = fresh_dir("train_determinism");
    std::string cfg_a = write_config(fresh_dir("train_determinism/a"),
                                     tiny_config_json((dir / "a_out").string()));
    std::string cfg_b = write_config(fresh_dir("train_determinism/b"),
                                     tiny_config_json((dir / "b_out").string()));
    CHECK(run_cli("train --config " + cfg_a).code == 0);
    CHECK(run_cli("train --config " + cfg_b).code == 0);
    CHECK(slurp(dir / "a_out" / "metrics.csv") == slurp(dir / "b_out" / "metrics.csv"));
    CHECK(slurp(dir / "a_out" / "checkpoint.hant") == slurp(dir / "b_out" / "checkpoint.hant"));
    CHECK(!slurp(dir / "a_out" / "checkpoint.hant").empty());
}

TEST_CASE("train rejects malformed configs") {
    fs::path dir = fresh_dir("train_bad");
    CHECK(run_cli("train --config " + (dir / "missing.json").string()).code == 2);
    CHECK(run_cli("train").code == 2);

    std::string unknown = write_config(
        dir, tiny_config_json((dir / "out").string(), "  \"banana\": 1"));
    CHECK(run_cli("train --config " + unknown).code == 2);

    fs::path dir2 = fresh_dir("train_bad2");
    std::string bad_mode = write_config(
        dir2, std::string("{\"task\": \"blobs\", \"output_dir\": \"") +
                  (dir2 / "out").string() + "\", \"ha\": {\"mode\": \"banana\"}}");
    CHECK(run_cli("train --config " + bad_mode).code == 2);

    fs::path dir3 = fresh_dir("train_bad3");
    std::string bad_epochs = write_config(
        dir3, std::string("{\"task\": \"blobs\", \"epochs\": 0, \"output_dir\": \"") +
                  (dir3 / "out").string() + "\"}");
    CHECK(run_cli("train --config " + bad_epochs).code == 2);
}

TEST_CASE("a diverging run exits with the numeric failure code") {
    fs::path dir = fresh_dir("train_explode");
    std::string cfg = write_config(
        dir, tiny_config_json((dir / "out").string(), "  \"train\": {\"lr\": 1e155}"));
    CmdResult r = run_cli("train --config " + cfg);
    CHECK(r.code == 3);
    CHECK(r.output.find("error:") != std::string::npos);
}

TEST_CASE("eval reproduces the training score and is itself deterministic") {
    fs::path dir = fresh_dir("eval_roundtrip");
    std::string cfg = write_config(dir, tiny_config_json((dir / "run").string()));
    REQUIRE(run_cli("train --config " + cfg).code == 0);
    const std::string ckpt = (dir / "run" / "checkpoint.hant").string();

    CmdResult r = run_cli("eval --checkpoint " + ckpt + " --output-dir " +
                          (dir / "eval1").string());
    CHECK(r.code == 0);
    const double best = best_mdice_from_metrics(dir / "run" / "metrics.csv");
    const double evaluated = eval_value(dir / "eval1" / "eval.csv", "mdice");
    CHECK(evaluated == doctest::Approx(best).epsilon(1e-12));
    CHECK(eval_value(dir / "eval1" / "eval.csv", "samples") == 2.0);

    CHECK(run_cli("eval --checkpoint " + ckpt + " --output-dir " + (dir / "eval2").string())
              .code == 0);
    CHECK(slurp(dir / "eval1" / "eval.csv") == slurp(dir / "eval2" / "eval.csv"));

    // fresh seeds work too and report the requested sample count
    CmdResult r2 = run_cli("eval --checkpoint " + ckpt +
                           " --seed-start 900 --count 3 --output-dir " +
                           (dir / "eval3").string());
    CHECK(r2.code == 0);
    CHECK(eval_value(dir / "eval3" / "eval.csv", "samples") == 3.0);
}

TEST_CASE("eval validates its arguments") {
    fs::path dir = fresh_dir("eval_bad");
    std::string cfg = write_config(dir, tiny_config_json((dir / "run").string()));
    REQUIRE(run_cli("train --config " + cfg).code == 0);
    const std::string ckpt = (dir / "run" / "checkpoint.hant").string();

    CHECK(run_cli("eval --checkpoint " + (dir / "nope.hant").string()).code == 2);
    CHECK(run_cli("eval --checkpoint " + ckpt + " --count 0").code == 2);
    CHECK(run_cli("eval --checkpoint " + ckpt + " --task disks").code == 2);
    CHECK(run_cli("eval").code == 2);
}

TEST_CASE("sweep grids over delta and n with monotone edge counts") {
    fs::path dir = fresh_dir("sweep");
    std::string cfg = write_config(
        dir, std::string("{\"task\": \"blobs\", \"epochs\": 1, \"seed\": 5, ") +
                 "\"output_dir\": \"" + (dir / "grid").string() +
                 "\", \"model\": {\"c\": 4, \"image\": 16}, " +
                 "\"data\": {\"train_samples\": 2, \"test_samples\": 2}}");
    CmdResult r = run_cli("sweep --config " + cfg + " --deltas 0.3,0.7 --ns 1,2");
    CHECK(r.code == 0);

    auto rows = read_csv(dir / "grid" / "sweep.csv");
    REQUIRE(rows.size() == 5);  // header + 4 cells
    CHECK(rows[0] == std::vector<std::string>{"delta", "n", "status", "mdice", "edges_b1"});
    long edges_lo = -1, edges_hi = -1;
    for (size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 5);
        CHECK(rows[i][2] == "ok");
        const double delta = std::stod(rows[i][0]);
        const long edges = std::stol(rows[i][4]);
        if (delta == 0.3) {
            if (edges_lo < 0) edges_lo = edges;
            CHECK(edges == edges_lo);  // same delta, same first-order graph
        } else {
            if (edges_hi < 0) edges_hi = edges;
            CHECK(edges == edges_hi);
        }
    }
    CHECK(edges_hi <= edges_lo);
    // every cell trained and saved its own artifacts
    CHECK(fs::exists(dir / "grid" / "d0.3_n1" / "metrics.csv"));
    CHECK(fs::exists(dir / "grid" / "d0.7_n2" / "checkpoint.hant"));

    CHECK(run_cli("sweep --config " + cfg + " --ns 1").code == 2);  // missing --deltas
    CHECK(run_cli("sweep --config " + cfg + " --deltas 2.0 --ns 1").code == 0);
    auto rows2 = read_csv(dir / "grid" / "sweep.csv");
    REQUIRE(rows2.size() == 2);
    CHECK(rows2[1][2] == "config-error");  // delta out of range recorded, not fatal
}

TEST_CASE("export-attention writes one pgm per level plus the graph") {
    fs::path dir = fresh_dir("export");
    std::string cfg = write_config(dir, tiny_config_json((dir / "run").string()));
    REQUIRE(run_cli("train --config " + cfg).code == 0);
    const std::string ckpt = (dir / "run" / "checkpoint.hant").string();

    CmdResult r = run_cli("export-attention --checkpoint " + ckpt +
                          " --sample-seed 5000004 --row 8 --col 8 --output-dir " +
                          (dir / "maps").string());
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "maps" / "attn_h1.pgm"));
    CHECK(fs::exists(dir / "maps" / "attn_h2.pgm"));
    CHECK(fs::exists(dir / "maps" / "graph_b1.pbm"));
    hanet::PgmImage a1 = hanet::read_pgm((dir / "maps" / "attn_h1.pgm").string());
    CHECK(a1.height == 4);  // image 16 -> grid 4
    CHECK(a1.width == 4);
    // the row is rescaled so its maximum is exactly 255
    int mx = 0;
    for (uint8_t px : a1.pixels) mx = std::max(mx, static_cast<int>(px));
    CHECK(mx == 255);

    CHECK(run_cli("export-attention --checkpoint " + ckpt +
                  " --row 16 --col 0 --output-dir " + (dir / "maps").string())
              .code == 2);  // pixel out of range
    CHECK(run_cli("export-attention --checkpoint " + ckpt + " --row 0").code == 2);
}

TEST_CASE("a threshold of one isolates the query pixel") {
    fs::path dir = fresh_dir("export_delta1");
    std::string cfg = write_config(
        dir, std::string("{\"task\": \"blobs\", \"epochs\": 1, \"seed\": 5, ") +
                 "\"output_dir\": \"" + (dir / "run").string() +
                 "\", \"model\": {\"c\": 4, \"image\": 16}, " +
                 "\"data\": {\"train_samples\": 2, \"test_samples\": 2}, " +
                 "\"ha\": {\"delta\": 1.0, \"n\": 1}}");
    REQUIRE(run_cli("train --config " + cfg).code == 0);
    CmdResult r = run_cli("export-attention --checkpoint " +
                          (dir / "run" / "checkpoint.hant").string() +
                          " --row 0 --col 0 --output-dir " + (dir / "maps").string());
    CHECK(r.code == 0);
    hanet::PgmImage a1 = hanet::read_pgm((dir / "maps" / "attn_h1.pgm").string());
    size_t nonzero = 0;
    for (uint8_t px : a1.pixels) nonzero += px != 0;
    CHECK(nonzero >= 1);  // the self-loop always survives
    CHECK(nonzero <= 2);  // plus at most the single entry that reaches 1.0

    hanet::PbmImage b1 = hanet::read_pbm((dir / "maps" / "graph_b1.pbm").string());
    size_t edges = 0;
    for (uint8_t px : b1.pixels) edges += px != 0;
    CHECK(edges >= 16);  // all self-loops on the 4x4 grid
    CHECK(edges <= 18);
}

TEST_CASE("dense-power checkpoints export attention without a graph") {
    fs::path dir = fresh_dir("export_dense");
    std::string cfg = write_config(
        dir, std::string("{\"task\": \"blobs\", \"epochs\": 1, \"seed\": 5, ") +
                 "\"output_dir\": \"" + (dir / "run").string() +
                 "\", \"model\": {\"c\": 4, \"image\": 16}, " +
                 "\"data\": {\"train_samples\": 2, \"test_samples\": 2}, " +
                 "\"ha\": {\"delta\": 0.5, \"n\": 2, \"mode\": \"dense-power\"}}");
    REQUIRE(run_cli("train --config " + cfg).code == 0);
    CmdResult r = run_cli("export-attention --checkpoint " +
                          (dir / "run" / "checkpoint.hant").string() +
                          " --row 8 --col 8 --output-dir " + (dir / "maps").string());
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "maps" / "attn_h1.pgm"));
    CHECK(fs::exists(dir / "maps" / "attn_h2.pgm"));
    CHECK(!fs::exists(dir / "maps" / "graph_b1.pbm"));
}

TEST_CASE("train-time exports appear when requested in the config") {
    fs::path dir = fresh_dir("train_export");
    std::string cfg = write_config(
        dir, tiny_config_json((dir / "run").string(),
                              "  \"export\": {\"attention\": true, \"graph\": true}"));
    REQUIRE(run_cli("train --config " + cfg).code == 0);
    CHECK(fs::exists(dir / "run" / "attn_h1.pgm"));
    CHECK(fs::exists(dir / "run" / "attn_h2.pgm"));
    CHECK(fs::exists(dir / "run" / "graph_b1.pbm"));
}
