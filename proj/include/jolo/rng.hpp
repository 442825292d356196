#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace jolo {

// Deterministic random stream. All samplers are implemented by hand on top of
// the raw 64-bit generator output so results are identical across platforms
// and standard-library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1], for safe use under log().
    double uniform_pos() { return 1.0 - uniform(); }

    // Standard normal via Box-Muller.
    double normal();

    // Gamma(shape, rate) via Marsaglia-Tsang squeeze, with the boost
    // transform for shape < 1. Mean is shape/rate.
    double gamma(double shape, double rate);

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

// Mixes an arbitrary key sequence into a child-stream seed, so that each
// (experiment, cell, replicate, purpose) tuple owns an independent stream and
// results do not depend on thread scheduling.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> keys);

inline Rng derive_stream(std::initializer_list<std::uint64_t> keys) {
    return Rng(derive_seed(keys));
}

// Standard normal quantile (inverse cdf), |error| < 1e-9 after polish.
double normal_quantile(double p);

} // namespace jolo
