#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <vector>

#include "skrvae/tensor.hpp"

namespace skr {

// Deterministic PRNG embedded in the repo so datasets and runs reproduce
// exactly across toolchains: xoshiro256++ seeded via splitmix64, uniform
// doubles from the top 53 bits, normals via Box-Muller with a cached spare.
// The draw order of every consumer is documented in the README.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    // Uniform on [0, 1).
    double next_double();

    // Uniform on [lo, hi).
    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Standard normal. Box-Muller consumes two uniforms and caches the
    // second variate; the cache persists across calls.
    double next_normal();

    void fill_normal(Tensor& t);
    void fill_uniform(Tensor& t, double lo, double hi);

    // Fisher-Yates; index j = floor(u * (i + 1)).
    std::vector<std::uint32_t> permutation(std::size_t n);

    struct State {
        std::array<std::uint64_t, 4> s;
        bool has_spare;
        double spare;
    };
    State state() const { return {state_, has_spare_, spare_}; }
    void set_state(const State& st) {
        state_ = st.s;
        has_spare_ = st.has_spare;
        spare_ = st.spare;
    }

private:
    std::array<std::uint64_t, 4> state_{};
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace skr
