#include <cstdint>
#include <cstdio>

#include <CLI11.hpp>

#include "hanet/graph.hpp"

// Times the bitset boolean matrix product against the naive triple loop on a
// random graph; the acceptance suite runs the same harness at L=1024.
int main(int argc, char** argv) {
    CLI::App app{"boolean matrix product benchmark"};
    size_t n = 1024;
    uint64_t seed = 7;
    app.add_option("--size", n, "matrix extent");
    app.add_option("--seed", seed, "graph seed");
    CLI11_PARSE(app, argc, argv);

    const hanet::BoolMultiplyBench bench = hanet::benchmark_bool_multiply(n, seed);
    std::printf("L=%zu naive=%.4fs bitset=%.6fs speedup=%.1fx products_equal=%s\n", n,
                bench.naive_seconds, bench.bitset_seconds, bench.speedup(),
                bench.products_equal ? "yes" : "NO");
    return bench.products_equal ? 0 : 1;
}
