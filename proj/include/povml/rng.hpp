#pragma once

#include <cstdint>
#include <vector>

namespace povml {

// Deterministic generator used everywhere randomness is needed. All draws go
// through hand-rolled mappings (not std distributions, whose output is
// implementation-defined), so a seed pins the byte-exact result.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // splitmix-style warmup so nearby seeds decorrelate
        next_u64();
        next_u64();
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform integer in [0, n). n must be > 0.
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

    // Uniform double in [0, 1) with 53 bits.
    double unit() { return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    // Derive an independent stream for a stage or task from a master seed.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed ^ (0x9e3779b97f4a7c15ULL + stream * 0xd1342543de82ef95ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

// Stage tags for fanning the master seed out to pipeline stages.
namespace seed_stream {
inline constexpr std::uint64_t kSplit = 1;
inline constexpr std::uint64_t kBalance = 2;
inline constexpr std::uint64_t kModel = 3;
inline constexpr std::uint64_t kCvFoldBase = 100;
}  // namespace seed_stream

}  // namespace povml
