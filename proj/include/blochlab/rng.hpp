#pragma once

// Deterministic random and quasi-random streams.
//
// Sampled point lists and estimator traces must be reproducible from a seed
// across platforms, so we avoid std::<distribution> (unspecified algorithms)
// and draw 53-bit uniforms straight from splitmix64.

#include <cmath>
#include <cstdint>
#include <vector>

namespace blochlab {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// Additive recurrence x_k = (x_0 + k·α) mod 1 with α built from the root of
// g^{d+1} = g + 1 (the R_d sequence). Low discrepancy in every dimension;
// the seed only shifts the starting phase, so two seeds explore the same
// lattice from different origins.
class RdSequence {
public:
    RdSequence(int dim, std::uint64_t seed) : alpha_(dim), x_(dim) {
        double g = 2.0;
        for (int it = 0; it < 64; ++it) g = std::pow(1.0 + g, 1.0 / (dim + 1));
        double p = 1.0;
        SplitMix64 mix(seed);
        for (int j = 0; j < dim; ++j) {
            p /= g;
            alpha_[j] = p;
            x_[j] = mix.uniform();
        }
    }

    const std::vector<double>& next() {
        for (size_t j = 0; j < x_.size(); ++j) {
            x_[j] += alpha_[j];
            if (x_[j] >= 1.0) x_[j] -= 1.0;
        }
        return x_;
    }

private:
    std::vector<double> alpha_;
    std::vector<double> x_;
};

} // namespace blochlab
