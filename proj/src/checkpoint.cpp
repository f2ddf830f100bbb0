#include "hanet/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "hanet/errors.hpp"

namespace hanet {

namespace {

constexpr char kMagic[4] = {'H', 'A', 'N', 'T'};
constexpr uint32_t kVersion = 1;

void put_u32(std::ofstream& out, uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_u64(std::ofstream& out, uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_f64(std::ofstream& out, double v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

uint32_t get_u32(std::ifstream& in, const std::string& path) {
    uint32_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
        throw DataError("load_checkpoint: truncated file " + path);
    }
    return v;
}
uint64_t get_u64(std::ifstream& in, const std::string& path) {
    uint64_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
        throw DataError("load_checkpoint: truncated file " + path);
    }
    return v;
}
double get_f64(std::ifstream& in, const std::string& path) {
    double v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
        throw DataError("load_checkpoint: truncated file " + path);
    }
    return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const CheckpointMeta& meta,
                     const SegNetParams& params) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("save_checkpoint: cannot open " + path);
    out.write(kMagic, 4);
    put_u32(out, kVersion);

    put_u32(out, static_cast<uint32_t>(meta.task));
    put_u32(out, static_cast<uint32_t>(meta.cfg.c_in));
    put_u32(out, static_cast<uint32_t>(meta.cfg.c));
    put_u32(out, static_cast<uint32_t>(meta.cfg.classes));
    put_u32(out, static_cast<uint32_t>(meta.cfg.image));
    put_f64(out, meta.cfg.ha.delta);
    put_u32(out, static_cast<uint32_t>(meta.cfg.ha.n));
    put_u32(out, static_cast<uint32_t>(meta.cfg.ha.mode));
    put_f64(out, meta.data.contrast);
    put_f64(out, meta.data.noise_sigma);
    put_u32(out, static_cast<uint32_t>(meta.data.branches));
    put_u32(out, static_cast<uint32_t>(meta.data.thickness));
    put_f64(out, meta.data.blob_noise);
    put_u64(out, meta.seed);
    put_u32(out, meta.train_samples);
    put_u32(out, meta.test_samples);

    const std::vector<VarPtr> vars = params.all();
    put_u32(out, static_cast<uint32_t>(vars.size()));
    for (const VarPtr& v : vars) {
        const Tensor& t = v->value;
        put_u32(out, static_cast<uint32_t>(t.rank()));
        for (size_t d = 0; d < t.rank(); ++d) put_u32(out, static_cast<uint32_t>(t.dim(d)));
        out.write(reinterpret_cast<const char*>(t.data()),
                  static_cast<std::streamsize>(t.size() * sizeof(double)));
    }
    if (!out) throw DataError("save_checkpoint: write failed for " + path);
}

std::pair<CheckpointMeta, SegNetParams> load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("load_checkpoint: cannot open " + path);
    char magic[4] = {};
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw DataError("load_checkpoint: bad magic in " + path);
    }
    const uint32_t version = get_u32(in, path);
    if (version != kVersion) {
        throw DataError("load_checkpoint: unsupported version " + std::to_string(version) +
                        " in " + path);
    }

    CheckpointMeta meta;
    const uint32_t task = get_u32(in, path);
    if (task > 2) throw DataError("load_checkpoint: bad task id in " + path);
    meta.task = static_cast<Task>(task);
    meta.cfg.c_in = static_cast<int>(get_u32(in, path));
    meta.cfg.c = static_cast<int>(get_u32(in, path));
    meta.cfg.classes = static_cast<int>(get_u32(in, path));
    meta.cfg.image = static_cast<int>(get_u32(in, path));
    meta.cfg.ha.delta = get_f64(in, path);
    meta.cfg.ha.n = static_cast<int>(get_u32(in, path));
    const uint32_t mode = get_u32(in, path);
    if (mode > 1) throw DataError("load_checkpoint: bad attention mode in " + path);
    meta.cfg.ha.mode = static_cast<HAMode>(mode);
    meta.cfg.ha.c = meta.cfg.c;
    meta.data.contrast = get_f64(in, path);
    meta.data.noise_sigma = get_f64(in, path);
    meta.data.branches = static_cast<int>(get_u32(in, path));
    meta.data.thickness = static_cast<int>(get_u32(in, path));
    meta.data.blob_noise = get_f64(in, path);
    meta.seed = get_u64(in, path);
    meta.train_samples = get_u32(in, path);
    meta.test_samples = get_u32(in, path);
    meta.cfg.validate();

    // materialize the parameter structure, then overwrite values from disk
    Rng rng(0);
    SegNetParams params = SegNetParams::init(rng, meta.cfg);
    const std::vector<VarPtr> vars = params.all();
    const uint32_t count = get_u32(in, path);
    if (count != vars.size()) {
        throw DataError("load_checkpoint: " + std::to_string(count) + " tensors for a " +
                        std::to_string(vars.size()) + "-tensor model in " + path);
    }
    for (const VarPtr& v : vars) {
        const uint32_t rank = get_u32(in, path);
        std::vector<size_t> shape(rank);
        for (uint32_t d = 0; d < rank; ++d) shape[d] = get_u32(in, path);
        if (shape != v->value.shape()) {
            throw DataError("load_checkpoint: tensor shape " + shape_to_string(shape) +
                            " does not match model shape " + v->value.shape_str() + " in " +
                            path);
        }
        if (!in.read(reinterpret_cast<char*>(v->value.data()),
                     static_cast<std::streamsize>(v->value.size() * sizeof(double)))) {
            throw DataError("load_checkpoint: truncated file " + path);
        }
    }
    return {meta, std::move(params)};
}

}  // namespace hanet
