#include "hanet/synth.hpp"

#include <algorithm>
#include <cmath>

#include "hanet/errors.hpp"
#include "hanet/rng.hpp"

namespace hanet {

int task_classes(Task t) { return t == Task::disks ? 3 : 2; }

std::string task_name(Task t) {
    switch (t) {
        case Task::disks: return "disks";
        case Task::vessels: return "vessels";
        case Task::blobs: return "blobs";
    }
    return "disks";
}

Task task_from_string(const std::string& s) {
    if (s == "disks") return Task::disks;
    if (s == "vessels") return Task::vessels;
    if (s == "blobs") return Task::blobs;
    throw ConfigError("task: expected disks|vessels|blobs, got \"" + s + "\"");
}

namespace {

constexpr double kPi = 3.14159265358979323846;

void add_noise_and_clamp(Tensor& image, Rng& rng, double sigma) {
    for (size_t i = 0; i < image.size(); ++i) {
        const double v = image[i] + rng.gaussian() * sigma;
        image[i] = std::clamp(v, 0.0, 1.0);
    }
}

}  // namespace

SegSample gen_nested_disks(uint64_t seed, size_t H, double contrast, double noise_sigma) {
    if (H == 0) {
        throw ConfigError("gen_nested_disks: image size must be >= 1");
    }
    if (contrast <= 0.0 || contrast > 1.0) {
        throw ConfigError("gen_nested_disks: contrast must be in (0,1], got " +
                          std::to_string(contrast));
    }
    if (noise_sigma < 0.0) {
        throw ConfigError("gen_nested_disks: noise_sigma must be >= 0, got " +
                          std::to_string(noise_sigma));
    }
    const double Hd = static_cast<double>(H);
    for (uint64_t attempt = 0; attempt < 64; ++attempt) {
        Rng rng(seed + attempt * 0x9E3779B97F4A7C15ull);
        const double cx = Hd * rng.uniform(0.38, 0.62);
        const double cy = Hd * rng.uniform(0.38, 0.62);
        const double ad = Hd * rng.uniform(0.22, 0.38);  // disc semi-axes
        const double bd = Hd * rng.uniform(0.22, 0.38);
        const double f = rng.uniform(0.45, 0.65);  // cup/disc scale
        const double ac = ad * f, bc = bd * f;
        // offset bounded so the cup ellipse stays strictly inside the disc:
        // (|dx|+ac) <= 0.7*ad and (|dy|+bc) <= 0.7*bd imply containment
        const double dx = rng.uniform(-1.0, 1.0) * (0.7 * ad - ac);
        const double dy = rng.uniform(-1.0, 1.0) * (0.7 * bd - bc);

        SegSample s;
        s.seed = seed;
        s.image = Tensor({1, H, H});
        s.mask.assign(H * H, 0);
        size_t counts[3] = {0, 0, 0};
        for (size_t y = 0; y < H; ++y) {
            for (size_t x = 0; x < H; ++x) {
                const double px = static_cast<double>(x), py = static_cast<double>(y);
                const double ed = ((px - cx) / ad) * ((px - cx) / ad) +
                                  ((py - cy) / bd) * ((py - cy) / bd);
                const double ec = ((px - cx - dx) / ac) * ((px - cx - dx) / ac) +
                                  ((py - cy - dy) / bc) * ((py - cy - dy) / bc);
                const int label = ec <= 1.0 ? 2 : (ed <= 1.0 ? 1 : 0);
                s.mask[y * H + x] = label;
                ++counts[label];
            }
        }
        if (counts[0] == 0 || counts[1] == 0 || counts[2] == 0) continue;  // degenerate

        for (size_t i = 0; i < H * H; ++i) {
            const int label = s.mask[i];
            s.image[i] = label == 0 ? 0.5 - contrast : (label == 1 ? 0.5 : 0.5 + contrast);
            s.image[i] = std::clamp(s.image[i], 0.0, 1.0);
        }
        add_noise_and_clamp(s.image, rng, noise_sigma);
        return s;
    }
    throw ConfigError("gen_nested_disks: no non-degenerate geometry after 64 attempts (H=" +
                      std::to_string(H) + ")");
}

SegSample gen_curvilinear(uint64_t seed, size_t H, int branches, int thickness) {
    if (H == 0) {
        throw ConfigError("gen_curvilinear: image size must be >= 1");
    }
    if (branches < 1) {
        throw ConfigError("gen_curvilinear: branches must be >= 1, got " +
                          std::to_string(branches));
    }
    if (thickness < 1) {
        throw ConfigError("gen_curvilinear: thickness must be >= 1, got " +
                          std::to_string(thickness));
    }
    Rng rng(seed);
    const double Hd = static_cast<double>(H);
    const long r = thickness - 1;  // Chebyshev brush half-width
    const long n = static_cast<long>(H);

    SegSample s;
    s.seed = seed;
    s.image = Tensor::full({1, H, H}, 0.25);
    s.mask.assign(H * H, 0);

    std::vector<std::pair<double, double>> trail;
    for (int b = 0; b < branches; ++b) {
        double x, y;
        if (b == 0 || trail.empty()) {
            x = Hd * rng.uniform(0.1, 0.9);
            y = Hd * rng.uniform(0.1, 0.9);
        } else {
            const auto& p = trail[rng.uniform_u64(trail.size())];
            x = p.first;
            y = p.second;
        }
        double dir = rng.uniform(0.0, 2.0 * kPi);
        const int steps = std::max(1, static_cast<int>(Hd * rng.uniform(0.35, 0.75)));
        for (int step = 0; step < steps; ++step) {
            const long ix = std::lround(x), iy = std::lround(y);
            for (long yy = std::max(0l, iy - r); yy <= std::min(n - 1, iy + r); ++yy)
                for (long xx = std::max(0l, ix - r); xx <= std::min(n - 1, ix + r); ++xx)
                    s.mask[static_cast<size_t>(yy) * H + static_cast<size_t>(xx)] = 1;
            trail.emplace_back(x, y);
            dir += rng.gaussian() * 0.3;
            x += std::cos(dir);
            y += std::sin(dir);
            // bounce off the borders
            if (x < 1.0 || x > Hd - 2.0) {
                dir = kPi - dir;
                x = std::clamp(x, 1.0, Hd - 2.0);
            }
            if (y < 1.0 || y > Hd - 2.0) {
                dir = -dir;
                y = std::clamp(y, 1.0, Hd - 2.0);
            }
        }
    }
    for (size_t i = 0; i < H * H; ++i)
        if (s.mask[i]) s.image[i] = 0.75;
    return s;
}

SegSample gen_noisy_blob(uint64_t seed, size_t H, double noise_sigma) {
    if (H == 0) {
        throw ConfigError("gen_noisy_blob: image size must be >= 1");
    }
    if (noise_sigma < 0.0) {
        throw ConfigError("gen_noisy_blob: noise_sigma must be >= 0, got " +
                          std::to_string(noise_sigma));
    }
    Rng rng(seed);
    const double Hd = static_cast<double>(H);
    const int nblobs = 1 + static_cast<int>(rng.uniform_u64(2));

    SegSample s;
    s.seed = seed;
    s.image = Tensor({1, H, H});
    s.mask.assign(H * H, 0);
    for (int b = 0; b < nblobs; ++b) {
        const double cx = Hd * rng.uniform(0.3, 0.7);
        const double cy = Hd * rng.uniform(0.3, 0.7);
        const double r = Hd * rng.uniform(0.15, 0.28);
        double amp[3], phase[3];
        for (int k = 0; k < 3; ++k) {
            amp[k] = rng.uniform(-0.15, 0.15);
            phase[k] = rng.uniform(0.0, 2.0 * kPi);
        }
        for (size_t y = 0; y < H; ++y) {
            for (size_t x = 0; x < H; ++x) {
                const double dx = static_cast<double>(x) - cx;
                const double dy = static_cast<double>(y) - cy;
                const double theta = std::atan2(dy, dx);
                double rim = 1.0;
                for (int k = 0; k < 3; ++k)
                    rim += amp[k] * std::cos(static_cast<double>(k + 1) * theta + phase[k]);
                if (std::hypot(dx, dy) <= r * rim) s.mask[y * H + x] = 1;
            }
        }
    }
    for (size_t i = 0; i < H * H; ++i) s.image[i] = s.mask[i] ? 0.7 : 0.3;
    add_noise_and_clamp(s.image, rng, noise_sigma);
    return s;
}

SegSample gen_sample(Task task, uint64_t seed, size_t H, const DataParams& params) {
    switch (task) {
        case Task::disks:
            return gen_nested_disks(seed, H, params.contrast, params.noise_sigma);
        case Task::vessels:
            return gen_curvilinear(seed, H, params.branches, params.thickness);
        case Task::blobs: return gen_noisy_blob(seed, H, params.blob_noise);
    }
    throw ConfigError("gen_sample: unknown task");
}

std::vector<SegSample> gen_dataset(Task task, uint64_t seed_start, size_t count, size_t H,
                                   const DataParams& params) {
    std::vector<SegSample> out;
    out.reserve(count);
    for (size_t i = 0; i < count; ++i)
        out.push_back(gen_sample(task, seed_start + i, H, params));
    return out;
}

}  // namespace hanet
