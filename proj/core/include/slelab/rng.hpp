#ifndef SLELAB_RNG_HPP
#define SLELAB_RNG_HPP

#include <cstdint>
#include <random>

namespace slelab {

/// splitmix64 step; used to whiten seeds and derive per-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Independent sub-stream seed for (base seed, stream index).
inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (0xD1B54A32D192ED03ULL * (index + 1));
    return splitmix64(s);
}

/// Seeded Gaussian source.
///
/// mt19937_64 is fully specified by the standard, and the Box-Muller
/// transform below uses only elementary libm calls, so a given seed
/// reproduces the same stream bit-for-bit on any conforming platform.
/// (std::normal_distribution is implementation-defined and is avoided
/// for that reason.)
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : engine_(whiten(seed)) {}

    /// Standard normal variate.
    double next();

    /// Uniform in [0, 1).
    double next_uniform();

private:
    static std::uint64_t whiten(std::uint64_t seed) {
        std::uint64_t s = seed;
        return splitmix64(s);
    }

    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace slelab

#endif
