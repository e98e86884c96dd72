#pragma once

#include <cstdint>
#include <random>

namespace f2f {

/// Seedable, splittable generator. Children are derived from (seed, stream)
/// so trajectory i always sees the same stream regardless of scheduling.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    Rng split(std::uint64_t stream) const;

    double uniform();
    int poisson(double mean);
    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    std::mt19937_64& engine() { return engine_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

}  // namespace f2f
