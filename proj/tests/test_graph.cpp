#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <vector>

#include "hanet/errors.hpp"
#include "hanet/graph.hpp"
#include "hanet/pnm.hpp"
#include "hanet/rng.hpp"
#include "hanet/tensor.hpp"

using namespace hanet;

namespace {

BoolAdjacency random_graph(Rng& rng, size_t n, double density) {
    BoolAdjacency b(n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (rng.uniform() < density) b.set(i, j);
    return b;
}

// chain 0 -> 1 -> ... -> n-1 (directed), self-loops from construction
BoolAdjacency chain_graph(size_t n) {
    BoolAdjacency b(n);
    for (size_t i = 0; i + 1 < n; ++i) b.set(i, i + 1);
    return b;
}

BoolAdjacency complete_graph(size_t n) {
    BoolAdjacency b(n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) b.set(i, j);
    return b;
}

}  // namespace

TEST_CASE("adjacency starts with self-loops only") {
    BoolAdjacency b(5);
    CHECK(b.size() == 5);
    CHECK(b.edge_count() == 5);
    for (size_t i = 0; i < 5; ++i)
        for (size_t j = 0; j < 5; ++j) CHECK(b.get(i, j) == (i == j));
    CHECK_THROWS_AS(BoolAdjacency(0), DimensionError);
}

TEST_CASE("set, clear and row_bools round-trip") {
    BoolAdjacency b(70);  // crosses the 64-bit word boundary
    b.set(0, 69);
    b.set(69, 0);
    CHECK(b.get(0, 69));
    CHECK(b.get(69, 0));
    b.clear(0, 69);
    CHECK(!b.get(0, 69));
    auto row = b.row_bools(69);
    REQUIRE(row.size() == 70);
    CHECK(row[0] == 1);
    CHECK(row[69] == 1);
    CHECK(row[1] == 0);
}

TEST_CASE("threshold graph keeps strong entries and the diagonal") {
    Tensor a = Tensor::from2d({{1.0, 0.4}, {0.6, 0.2}});
    BoolAdjacency b = BoolAdjacency::from_threshold(a, 0.5);
    CHECK(b.get(0, 0));   // 1.0 >= 0.5
    CHECK(!b.get(0, 1));  // 0.4 <  0.5
    CHECK(b.get(1, 0));   // 0.6 >= 0.5
    CHECK(b.get(1, 1));   // 0.2 <  0.5 but the diagonal is forced
    CHECK(b.edge_count() == 3);
}

TEST_CASE("threshold boundaries") {
    Tensor a = Tensor::from2d({{0.0, 0.5}, {0.49999, 1.0}});
    BoolAdjacency at0 = BoolAdjacency::from_threshold(a, 0.0);
    CHECK(at0.edge_count() == 4);  // every entry >= 0
    BoolAdjacency at1 = BoolAdjacency::from_threshold(a, 1.0);
    CHECK(at1.get(1, 1));
    CHECK(at1.get(0, 0));  // forced diagonal
    CHECK(!at1.get(0, 1));
    CHECK(!at1.get(1, 0));
    BoolAdjacency athalf = BoolAdjacency::from_threshold(a, 0.5);
    CHECK(athalf.get(0, 1));  // ties are kept (>=)
    CHECK(!athalf.get(1, 0));

    CHECK_THROWS_AS(BoolAdjacency::from_threshold(a, -0.1), ConfigError);
    CHECK_THROWS_AS(BoolAdjacency::from_threshold(a, 1.1), ConfigError);
    Tensor rect({2, 3});
    CHECK_THROWS_AS(BoolAdjacency::from_threshold(rect, 0.5), DimensionError);
}

TEST_CASE("boolean product equals existence of a two-hop path") {
    BoolAdjacency c = chain_graph(3);
    BoolAdjacency c2 = bool_multiply(c, c);
    CHECK(c2.get(0, 1));
    CHECK(c2.get(0, 2));  // 0 -> 1 -> 2 opens up
    CHECK(!c2.get(2, 0));
    CHECK(!c2.get(1, 0));
}

TEST_CASE("bitset product matches the naive triple loop across word boundaries") {
    Rng rng(21);
    for (size_t n : {1u, 2u, 5u, 63u, 64u, 65u, 70u}) {
        for (int t = 0; t < 4; ++t) {
            BoolAdjacency a = random_graph(rng, n, 0.15);
            BoolAdjacency b = random_graph(rng, n, 0.15);
            CHECK(bool_multiply(a, b) == bool_multiply_naive(a, b));
        }
    }
    BoolAdjacency a(3), b(4);
    CHECK_THROWS_AS(bool_multiply(a, b), DimensionError);
}

TEST_CASE("bool_power validates h and matches repeated multiplication") {
    Rng rng(22);
    BoolAdjacency b = random_graph(rng, 20, 0.1);
    CHECK_THROWS_AS(bool_power(b, 0), ConfigError);
    CHECK_THROWS_AS(bool_power(b, -1), ConfigError);
    CHECK(bool_power(b, 1) == b);
    CHECK(bool_power(b, 2) == bool_multiply(b, b));
    CHECK(bool_power(b, 3) == bool_multiply(bool_multiply(b, b), b));
}

TEST_CASE("powers of a complete graph are fixed") {
    BoolAdjacency k = complete_graph(9);
    CHECK(bool_power(k, 2) == k);
    CHECK(bool_power(k, 5) == k);
}

TEST_CASE("powers grow monotonically thanks to self-loops") {
    Rng rng(23);
    for (int t = 0; t < 30; ++t) {
        size_t n = 2 + rng.uniform_u64(40);
        BoolAdjacency b = random_graph(rng, n, 0.08);
        BoolAdjacency prev = b;
        for (int h = 2; h <= 4; ++h) {
            BoolAdjacency cur = bool_power(b, h);
            CHECK(prev.subset_of(cur));
            prev = cur;
        }
    }
}

TEST_CASE("bfs_within basics") {
    BoolAdjacency c = chain_graph(4);
    auto r0 = bfs_within(c, 0, 0);
    CHECK(r0 == std::vector<uint8_t>{1, 0, 0, 0});
    auto r1 = bfs_within(c, 0, 1);
    CHECK(r1 == std::vector<uint8_t>{1, 1, 0, 0});
    auto r3 = bfs_within(c, 0, 3);
    CHECK(r3 == std::vector<uint8_t>{1, 1, 1, 1});
    auto rb = bfs_within(c, 3, 2);
    CHECK(rb == std::vector<uint8_t>{0, 0, 0, 1});  // edges are directed
    CHECK_THROWS_AS(bfs_within(c, 4, 1), IndexError);

    BoolAdjacency lone(1);
    CHECK(bfs_within(lone, 0, 5) == std::vector<uint8_t>{1});
}

TEST_CASE("bool_power rows equal bfs reachability on random graphs") {
    Rng rng(24);
    for (int t = 0; t < 40; ++t) {
        size_t n = 2 + rng.uniform_u64(30);
        BoolAdjacency b = random_graph(rng, n, rng.uniform(0.02, 0.2));
        for (int h : {1, 2, 3}) {
            BoolAdjacency bh = bool_power(b, h);
            for (size_t src = 0; src < n; ++src) {
                CHECK(bh.row_bools(src) == bfs_within(b, src, h));
            }
        }
    }
}

TEST_CASE("transitive closure of a complete graph converges immediately") {
    BoolAdjacency k = complete_graph(6);
    auto [closure, h] = transitive_closure(k);
    CHECK(closure == k);
    CHECK(h == 1);
}

TEST_CASE("transitive closure of a directed chain") {
    BoolAdjacency c = chain_graph(4);
    auto [closure, h] = transitive_closure(c);
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = 0; j < 4; ++j) CHECK(closure.get(i, j) == (j >= i));
    CHECK(h >= 1);
    CHECK(h <= 3);
    // fixed point: one more multiplication changes nothing
    CHECK(bool_multiply(closure, c) == closure);
}

TEST_CASE("closure is stable on random graphs and reached within n steps") {
    Rng rng(25);
    for (int t = 0; t < 20; ++t) {
        size_t n = 2 + rng.uniform_u64(24);
        BoolAdjacency b = random_graph(rng, n, 0.1);
        auto [closure, h] = transitive_closure(b);
        CHECK(h >= 1);
        CHECK(h <= static_cast<int>(n));
        CHECK(bool_multiply(closure, b) == closure);
        CHECK(bool_power(b, static_cast<int>(n)) == closure);
        // B^n == B^(n+1): powers cannot grow past the closure
        CHECK(bool_power(b, static_cast<int>(n) + 1) == closure);
    }
}

TEST_CASE("threshold edges shrink as delta grows") {
    Rng rng(26);
    for (int t = 0; t < 20; ++t) {
        size_t n = 2 + rng.uniform_u64(20);
        Tensor a({n, n});
        for (size_t i = 0; i < a.size(); ++i) a[i] = rng.uniform();
        double d1 = rng.uniform(0.0, 0.5), d2 = rng.uniform(d1, 1.0);
        BoolAdjacency lo = BoolAdjacency::from_threshold(a, d1);
        BoolAdjacency hi = BoolAdjacency::from_threshold(a, d2);
        CHECK(hi.subset_of(lo));
        CHECK(hi.edge_count() <= lo.edge_count());
    }
}

TEST_CASE("disconnected components never mix under powers") {
    // two complete blocks {0,1,2} and {3,4}
    BoolAdjacency b(5);
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = 0; j < 3; ++j) b.set(i, j);
    for (size_t i = 3; i < 5; ++i)
        for (size_t j = 3; j < 5; ++j) b.set(i, j);
    BoolAdjacency p = bool_power(b, 4);
    CHECK(p == b);
    CHECK(!p.get(0, 3));
    CHECK(!p.get(4, 2));
}

TEST_CASE("benchmark products agree on a small instance") {
    BoolMultiplyBench bench = benchmark_bool_multiply(96, 5);
    CHECK(bench.products_equal);
    CHECK(bench.naive_seconds > 0.0);
    CHECK(bench.bitset_seconds > 0.0);
}

TEST_CASE("pbm round-trip preserves the adjacency pattern") {
    Rng rng(27);
    BoolAdjacency b = random_graph(rng, 70, 0.1);
    auto path = std::filesystem::temp_directory_path() / "hanet_test_graph.pbm";
    write_pbm(path.string(), b);
    PbmImage img = read_pbm(path.string());
    REQUIRE(img.height == 70);
    REQUIRE(img.width == 70);
    for (size_t i = 0; i < img.height; ++i)
        for (size_t j = 0; j < img.width; ++j)
            CHECK(img.pixels[i * img.width + j] == (b.get(i, j) ? 1 : 0));
    std::filesystem::remove(path);
}
