#pragma once

#include <cstdint>

namespace hanet {

// Explicit xorshift64* generator. Every stochastic piece of the repo
// (parameter init, dataset synthesis, test case generation) draws from this,
// never from the platform default, so datasets and runs are reproducible
// across toolchains.
class Rng {
  public:
    explicit Rng(uint64_t seed);

    uint64_t next_u64();
    // [0, 1)
    double uniform();
    double uniform(double lo, double hi);
    // [0, n), n > 0; multiply-shift range map, no modulo
    uint64_t uniform_u64(uint64_t n);
    // standard normal via Box-Muller; caches the paired draw
    double gaussian();

  private:
    uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace hanet
