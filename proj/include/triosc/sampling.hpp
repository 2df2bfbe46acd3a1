#pragma once

// Deterministic sample generators shared by the CLI batch runs and the
// acceptance suite, so both see identical matrices for a given seed.
// Each index gets its own generator state, which makes batches independent
// of evaluation order and thread count.

#include <cstdint>
#include <numbers>

#include "triosc/linalg3.hpp"
#include "triosc/rng.hpp"

namespace triosc {

inline SymMat3 random_symmat3(Xoshiro256ss& rng, double lo, double hi) {
    SymMat3 g;
    g.d1 = rng.uniform(lo, hi);
    g.d2 = rng.uniform(lo, hi);
    g.d3 = rng.uniform(lo, hi);
    g.o12 = rng.uniform(lo, hi);
    g.o13 = rng.uniform(lo, hi);
    g.o23 = rng.uniform(lo, hi);
    return g;
}

inline SymMat3 random_symmat3(std::uint64_t seed, std::uint64_t index, double lo, double hi) {
    Xoshiro256ss rng = sample_rng(seed, index);
    return random_symmat3(rng, lo, hi);
}

struct AngleTriple {
    double phi, theta, psi;
};

inline AngleTriple random_angle_triple(Xoshiro256ss& rng) {
    constexpr double pi = std::numbers::pi;
    return AngleTriple{rng.uniform(-pi, pi), rng.uniform(-pi, pi), rng.uniform(-pi, pi)};
}

inline AngleTriple random_angle_triple(std::uint64_t seed, std::uint64_t index) {
    Xoshiro256ss rng = sample_rng(seed, index);
    return random_angle_triple(rng);
}

}  // namespace triosc
