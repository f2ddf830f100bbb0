#include "hanet/pnm.hpp"

#include <cmath>
#include <fstream>

#include "hanet/errors.hpp"

namespace hanet {

void write_pgm(const std::string& path, const std::vector<uint8_t>& pixels, size_t height,
               size_t width) {
    if (pixels.size() != height * width) {
        throw DimensionError("write_pgm: " + std::to_string(pixels.size()) +
                             " pixels for extents " + std::to_string(height) + "x" +
                             std::to_string(width));
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("write_pgm: cannot open " + path);
    out << "P5\n" << width << " " << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(pixels.data()),
              static_cast<std::streamsize>(pixels.size()));
    if (!out) throw DataError("write_pgm: write failed for " + path);
}

void write_pbm(const std::string& path, const BoolAdjacency& adj) {
    std::ofstream out(path);
    if (!out) throw DataError("write_pbm: cannot open " + path);
    const size_t n = adj.size();
    out << "P1\n" << n << " " << n << "\n";
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            out << (adj.get(i, j) ? '1' : '0');
            out << (((j + 1) % 64 == 0 || j + 1 == n) ? '\n' : ' ');
        }
    }
    if (!out) throw DataError("write_pbm: write failed for " + path);
}

void write_attention_pgm(const std::string& path, const Tensor& a_level, size_t row_index,
                         size_t grid_h, size_t grid_w) {
    const size_t L = grid_h * grid_w;
    if (a_level.rank() != 2 || a_level.dim(0) != L || a_level.dim(1) != L) {
        throw DimensionError("write_attention_pgm: map " + a_level.shape_str() +
                             " vs grid " + std::to_string(grid_h) + "x" +
                             std::to_string(grid_w));
    }
    if (row_index >= L) {
        throw IndexError("write_attention_pgm: row " + std::to_string(row_index) +
                         " out of range [0," + std::to_string(L) + ")");
    }
    double mx = 0.0;
    for (size_t j = 0; j < L; ++j) mx = std::max(mx, a_level.at2(row_index, j));
    std::vector<uint8_t> pixels(L, 0);
    if (mx > 0.0) {
        for (size_t j = 0; j < L; ++j) {
            pixels[j] =
                static_cast<uint8_t>(std::lround(a_level.at2(row_index, j) / mx * 255.0));
        }
    }
    write_pgm(path, pixels, grid_h, grid_w);
}

PgmImage read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("read_pgm: cannot open " + path);
    std::string magic;
    size_t width = 0, height = 0;
    int maxval = 0;
    in >> magic >> width >> height >> maxval;
    if (magic != "P5" || maxval != 255 || width == 0 || height == 0) {
        throw DataError("read_pgm: unsupported header in " + path);
    }
    in.get();  // single whitespace after maxval
    PgmImage img;
    img.height = height;
    img.width = width;
    img.pixels.resize(width * height);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
        throw DataError("read_pgm: truncated pixel data in " + path);
    }
    return img;
}

PbmImage read_pbm(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("read_pbm: cannot open " + path);
    std::string magic;
    size_t width = 0, height = 0;
    in >> magic >> width >> height;
    if (magic != "P1" || width == 0 || height == 0) {
        throw DataError("read_pbm: unsupported header in " + path);
    }
    PbmImage img;
    img.height = height;
    img.width = width;
    img.pixels.reserve(width * height);
    char ch = 0;
    while (img.pixels.size() < width * height && in >> ch) {
        if (ch == '0' || ch == '1') img.pixels.push_back(ch == '1' ? 1 : 0);
    }
    if (img.pixels.size() != width * height) {
        throw DataError("read_pbm: truncated pixel data in " + path);
    }
    return img;
}

}  // namespace hanet
