#ifndef TEAMFORM_RNG_HPP
#define TEAMFORM_RNG_HPP

#include <cstdint>
#include <random>

namespace teamform {

// splitmix64; used to derive independent per-run seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return mix_seed(mix_seed(a) ^ (0x9e3779b97f4a7c15ULL + b));
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix_seed(mix_seed(a, b), c);
}

// Seeded generator with draw primitives that do not depend on the standard
// library's unspecified distribution algorithms, so identical seeds give
// identical streams on every platform.
class Rng {
public:
    static constexpr const char* kAlgorithm = "mt19937_64";

    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // Uniform draw from {0, 1, ..., k-1}, unbiased via rejection.
    std::size_t uniform_index(std::size_t k) {
        const std::uint64_t n = static_cast<std::uint64_t>(k);
        const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
        for (;;) {
            std::uint64_t r = eng_();
            if (r >= threshold) return static_cast<std::size_t>(r % n);
        }
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 eng_;
};

}  // namespace teamform

#endif
