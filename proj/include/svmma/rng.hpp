#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace svmma {

// Seedable random stream with bit-stable output across platforms.
//
// Bits come from std::mt19937_64 (bit-exact by the standard); all
// conversions to doubles and bounded integers are done here rather than
// through std::*_distribution, whose output is implementation-defined.
//
// Stream splitting: child k of master seed m is seeded with
// splitmix64(m + (k+1) * 0x9E3779B97F4A7C15). Experiment replication d
// uses child d of the master seed; generators that need several
// independent streams within one replication take further children of
// the replication seed.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    static std::uint64_t child_seed(std::uint64_t master, std::uint64_t stream);
    static RngStream child(std::uint64_t master, std::uint64_t stream) {
        return RngStream(child_seed(master, stream));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Unbiased uniform integer on [0, upper); upper must be > 0.
    std::uint64_t uniform_index(std::uint64_t upper);

    // Standard normal via Box-Muller; one spare is cached.
    double normal();

    bool bernoulli(double p) { return uniform01() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_index(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace svmma
