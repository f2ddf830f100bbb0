#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hanet/tensor.hpp"

namespace hanet {

// Square boolean adjacency matrix with bitset rows, 64 nodes per word.
// Every instance starts with the diagonal true (self-loops), so powers mean
// "reachable within <= h hops" and no attention row can end up empty.
class BoolAdjacency {
  public:
    explicit BoolAdjacency(size_t n);

    // B^1 of the pipeline: edge (i,j) iff a_norm[i,j] >= delta, diagonal kept
    // true regardless.
    static BoolAdjacency from_threshold(const Tensor& a_norm, double delta);

    size_t size() const { return n_; }
    size_t words_per_row() const { return wpr_; }

    bool get(size_t i, size_t j) const {
        return (bits_[i * wpr_ + j / 64] >> (j % 64)) & 1u;
    }
    void set(size_t i, size_t j) { bits_[i * wpr_ + j / 64] |= uint64_t(1) << (j % 64); }
    void clear(size_t i, size_t j) {
        bits_[i * wpr_ + j / 64] &= ~(uint64_t(1) << (j % 64));
    }

    const uint64_t* row_words(size_t i) const { return bits_.data() + i * wpr_; }
    uint64_t* row_words(size_t i) { return bits_.data() + i * wpr_; }

    size_t edge_count() const;
    std::vector<uint8_t> row_bools(size_t i) const;
    // true if every edge of this graph is also in o
    bool subset_of(const BoolAdjacency& o) const;

    bool operator==(const BoolAdjacency& o) const { return n_ == o.n_ && bits_ == o.bits_; }
    bool operator!=(const BoolAdjacency& o) const { return !(*this == o); }

  private:
    size_t n_ = 0;
    size_t wpr_ = 0;
    std::vector<uint64_t> bits_;
};

// Boolean-semiring product: out(i,j) iff exists k with a(i,k) and b(k,j).
// The bitset version ORs whole rows of b; the naive version is the O(L^3)
// triple loop kept as an oracle and benchmark baseline.
BoolAdjacency bool_multiply(const BoolAdjacency& a, const BoolAdjacency& b);
BoolAdjacency bool_multiply_naive(const BoolAdjacency& a, const BoolAdjacency& b);

// h-th boolean power, binarized after every multiplication; h >= 1
BoolAdjacency bool_power(const BoolAdjacency& b, int h);

// nodes reachable from source within <= h hops (independent oracle for
// bool_power rows); includes the source itself
std::vector<uint8_t> bfs_within(const BoolAdjacency& b, size_t source, int h);

// fixed point of powering plus the smallest h with B^(h+1) == B^h
std::pair<BoolAdjacency, int> transitive_closure(const BoolAdjacency& b);

struct BoolMultiplyBench {
    double bitset_seconds = 0.0;
    double naive_seconds = 0.0;
    bool products_equal = false;
    double speedup() const {
        return bitset_seconds > 0.0 ? naive_seconds / bitset_seconds : 0.0;
    }
};

// Times one naive product against the bitset product on a random graph of
// size n (edge density ~5% plus self-loops) and cross-checks the results.
BoolMultiplyBench benchmark_bool_multiply(size_t n, uint64_t seed);

}  // namespace hanet
