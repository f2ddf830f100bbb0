#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hanet/tensor.hpp"

namespace hanet {

enum class Task { disks, vessels, blobs };

int task_classes(Task t);  // disks: 3 (bg/disc/cup), others: 2
std::string task_name(Task t);
Task task_from_string(const std::string& s);

struct SegSample {
    Tensor image;           // [1 x H x W], values in [0,1]
    std::vector<int> mask;  // H*W labels in {0..K-1}
    uint64_t seed = 0;
};

// Knobs shared by the generators; each family reads the fields it needs.
struct DataParams {
    double contrast = 0.15;     // disks: intensity gap between classes
    double noise_sigma = 0.05;  // disks: additive Gaussian noise
    int branches = 3;           // vessels: number of random-walk strokes
    int thickness = 2;          // vessels: brush half-width is thickness-1
    double blob_noise = 0.2;    // blobs: additive Gaussian noise
};

// Three synthetic families: low-contrast concentric ellipses (K=3, the
// cup/disc analog), branching curvilinear strokes (K=2), and wobbly blobs
// under heavy noise (K=2). All are pure functions of their arguments.
SegSample gen_nested_disks(uint64_t seed, size_t H, double contrast, double noise_sigma);
SegSample gen_curvilinear(uint64_t seed, size_t H, int branches, int thickness);
SegSample gen_noisy_blob(uint64_t seed, size_t H, double noise_sigma);

SegSample gen_sample(Task task, uint64_t seed, size_t H, const DataParams& params);
std::vector<SegSample> gen_dataset(Task task, uint64_t seed_start, size_t count, size_t H,
                                   const DataParams& params);

}  // namespace hanet
