#include "hanet/graph.hpp"

#include <bit>
#include <chrono>

#include "hanet/errors.hpp"
#include "hanet/rng.hpp"

namespace hanet {

BoolAdjacency::BoolAdjacency(size_t n) : n_(n), wpr_((n + 63) / 64), bits_(n * wpr_, 0) {
    if (n == 0) throw DimensionError("BoolAdjacency: size must be positive");
    for (size_t i = 0; i < n_; ++i) set(i, i);
}

BoolAdjacency BoolAdjacency::from_threshold(const Tensor& a_norm, double delta) {
    if (delta < 0.0 || delta > 1.0) {
        throw ConfigError("from_threshold: delta must be in [0,1], got " +
                          std::to_string(delta));
    }
    if (a_norm.rank() != 2 || a_norm.dim(0) != a_norm.dim(1)) {
        throw DimensionError("from_threshold: input must be square, got " +
                             a_norm.shape_str());
    }
    const size_t n = a_norm.dim(0);
    BoolAdjacency b(n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (a_norm.at2(i, j) >= delta) b.set(i, j);
    return b;
}

size_t BoolAdjacency::edge_count() const {
    size_t count = 0;
    for (uint64_t w : bits_) count += static_cast<size_t>(std::popcount(w));
    return count;
}

std::vector<uint8_t> BoolAdjacency::row_bools(size_t i) const {
    std::vector<uint8_t> out(n_);
    for (size_t j = 0; j < n_; ++j) out[j] = get(i, j) ? 1 : 0;
    return out;
}

bool BoolAdjacency::subset_of(const BoolAdjacency& o) const {
    if (n_ != o.n_) return false;
    for (size_t w = 0; w < bits_.size(); ++w)
        if (bits_[w] & ~o.bits_[w]) return false;
    return true;
}

namespace {

// scratch without the forced diagonal, for honest products
BoolAdjacency blank(size_t n) {
    BoolAdjacency b(n);
    for (size_t i = 0; i < n; ++i) b.clear(i, i);
    return b;
}

}  // namespace

BoolAdjacency bool_multiply(const BoolAdjacency& a, const BoolAdjacency& b) {
    if (a.size() != b.size()) {
        throw DimensionError("bool_multiply: sizes differ: " + std::to_string(a.size()) +
                             " vs " + std::to_string(b.size()));
    }
    const size_t n = a.size(), w = a.words_per_row();
    BoolAdjacency c = blank(n);
    for (size_t i = 0; i < n; ++i) {
        const uint64_t* arow = a.row_words(i);
        uint64_t* crow = c.row_words(i);
        for (size_t wi = 0; wi < w; ++wi) {
            uint64_t bits = arow[wi];
            while (bits) {
                const size_t k = wi * 64 + static_cast<size_t>(std::countr_zero(bits));
                bits &= bits - 1;
                const uint64_t* brow = b.row_words(k);
                for (size_t wj = 0; wj < w; ++wj) crow[wj] |= brow[wj];
            }
        }
    }
    return c;
}

BoolAdjacency bool_multiply_naive(const BoolAdjacency& a, const BoolAdjacency& b) {
    if (a.size() != b.size()) {
        throw DimensionError("bool_multiply_naive: sizes differ: " +
                             std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
    const size_t n = a.size();
    BoolAdjacency c = blank(n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            bool v = false;
            for (size_t k = 0; k < n; ++k) v = v || (a.get(i, k) && b.get(k, j));
            if (v) c.set(i, j);
        }
    }
    return c;
}

BoolAdjacency bool_power(const BoolAdjacency& b, int h) {
    if (h < 1) throw ConfigError("bool_power: h must be >= 1, got " + std::to_string(h));
    BoolAdjacency out = b;
    for (int i = 1; i < h; ++i) out = bool_multiply(out, b);
    return out;
}

std::vector<uint8_t> bfs_within(const BoolAdjacency& b, size_t source, int h) {
    const size_t n = b.size();
    if (source >= n) {
        throw IndexError("bfs_within: source " + std::to_string(source) + " out of range [0," +
                         std::to_string(n) + ")");
    }
    std::vector<uint8_t> visited(n, 0);
    visited[source] = 1;
    std::vector<size_t> frontier{source};
    for (int depth = 0; depth < h && !frontier.empty(); ++depth) {
        std::vector<size_t> next;
        for (size_t u : frontier) {
            for (size_t v = 0; v < n; ++v) {
                if (!visited[v] && b.get(u, v)) {
                    visited[v] = 1;
                    next.push_back(v);
                }
            }
        }
        frontier = std::move(next);
    }
    return visited;
}

std::pair<BoolAdjacency, int> transitive_closure(const BoolAdjacency& b) {
    BoolAdjacency cur = b;
    const int cap = static_cast<int>(b.size());
    for (int h = 1; h <= cap; ++h) {
        BoolAdjacency next = bool_multiply(cur, b);
        if (next == cur) return {std::move(cur), h};
        cur = std::move(next);
    }
    // unreachable when self-loops hold (powers grow monotonically, bounded by L)
    throw StateError("transitive_closure: no fixed point within " + std::to_string(cap) +
                     " powers; input is missing self-loops");
}

BoolMultiplyBench benchmark_bool_multiply(size_t n, uint64_t seed) {
    Rng rng(seed);
    BoolAdjacency a(n), b(n);
    const size_t extra = n * n / 20;  // ~5% density
    for (size_t e = 0; e < extra; ++e) {
        a.set(rng.uniform_u64(n), rng.uniform_u64(n));
        b.set(rng.uniform_u64(n), rng.uniform_u64(n));
    }
    using clock = std::chrono::steady_clock;

    const auto t0 = clock::now();
    BoolAdjacency naive = bool_multiply_naive(a, b);
    const auto t1 = clock::now();

    // repeat the fast product until enough wall time accumulates to measure
    const auto t2 = clock::now();
    BoolAdjacency fast = bool_multiply(a, b);
    size_t reps = 1;
    while (std::chrono::duration<double>(clock::now() - t2).count() < 0.05) {
        fast = bool_multiply(a, b);
        ++reps;
    }
    const auto t3 = clock::now();

    BoolMultiplyBench bench;
    bench.naive_seconds = std::chrono::duration<double>(t1 - t0).count();
    bench.bitset_seconds =
        std::chrono::duration<double>(t3 - t2).count() / static_cast<double>(reps);
    bench.products_equal = (naive == fast);
    return bench;
}

}  // namespace hanet
