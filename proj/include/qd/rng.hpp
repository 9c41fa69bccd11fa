#pragma once
#include <cmath>
#include <cstdint>

namespace qd {

// Deterministic stream RNG. std::mt19937_64 output is pinned by the standard,
// but the <random> distributions are not, so the mappings below are hand-rolled
// to keep results byte-identical across platforms and library versions.
// Streams are derived from (seed, stream index) so independent trajectories /
// samples can run on any thread layout without changing results.
class Rng {
  public:
    explicit Rng(uint64_t seed, uint64_t stream = 0) {
        state_ = splitmix(seed + 0x9e3779b97f4a7c15ULL * (stream + 1));
        for (int i = 0; i < 4; ++i) state_ = splitmix(state_);
    }

    uint64_t next_u64() {
        state_ = splitmix(state_);
        return state_;
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in (0, 1], safe as log() argument
    double uniform_pos() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

    // uniform integer in [0, n)
    int below(int n) { return static_cast<int>(next_u64() % static_cast<uint64_t>(n)); }

    // exponential waiting time with the given total rate
    double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

  private:
    static uint64_t splitmix(uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    uint64_t state_;
};

}  // namespace qd
