#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hanet/graph.hpp"
#include "hanet/tensor.hpp"

namespace hanet {

// binary 8-bit PGM (P5), pixels row-major
void write_pgm(const std::string& path, const std::vector<uint8_t>& pixels, size_t height,
               size_t width);

// plain-text PBM (P1) of an adjacency matrix, 1 = edge
void write_pbm(const std::string& path, const BoolAdjacency& adj);

// one attention row laid out on the feature grid, rescaled so the row
// maximum maps to 255; masked-out entries stay exactly 0
void write_attention_pgm(const std::string& path, const Tensor& a_level, size_t row_index,
                         size_t grid_h, size_t grid_w);

struct PgmImage {
    size_t height = 0, width = 0;
    std::vector<uint8_t> pixels;
};
PgmImage read_pgm(const std::string& path);

struct PbmImage {
    size_t height = 0, width = 0;
    std::vector<uint8_t> pixels;  // 0/1
};
PbmImage read_pbm(const std::string& path);

}  // namespace hanet
