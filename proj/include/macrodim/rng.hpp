#pragma once

#include <cmath>
#include <cstdint>

// Counter-based random numbers: every draw is a pure function of a key and a
// counter, so generation order and sharding never change the output.
namespace macrodim::rng {

// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) { return mix(mix(a) ^ b); }
inline std::uint64_t mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix(mix(mix(a) ^ b) ^ c);
}

// Uniform in (0,1]: never returns 0, safe under log().
inline double u01(std::uint64_t word) {
    return static_cast<double>((word >> 11) + 1) * 0x1.0p-53;
}

// Seed for replica r of a campaign; decorrelates nearby base seeds.
inline std::uint64_t replica_seed(std::uint64_t base_seed, std::uint64_t replica) {
    return mix(base_seed, 0x7265706c69636173ULL, replica);
}

// A keyed stream: draw(i) is the i-th variate of the stream.
class Stream {
  public:
    explicit Stream(std::uint64_t key) : key_(key) {}
    Stream(std::uint64_t seed, std::uint64_t stream_id) : key_(mix(seed, stream_id)) {}

    std::uint64_t word(std::uint64_t ctr) const { return mix(key_, ctr); }
    double uniform(std::uint64_t ctr) const { return u01(word(ctr)); }
    double exponential(std::uint64_t ctr) const { return -std::log(uniform(ctr)); }

    // Standard normal via Box-Muller; consumes counters 2*ctr and 2*ctr+1.
    double normal(std::uint64_t ctr) const {
        const double u = uniform(2 * ctr);
        const double v = uniform(2 * ctr + 1);
        return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925287 * v);
    }

    std::uint64_t key() const { return key_; }

  private:
    std::uint64_t key_;
};

}  // namespace macrodim::rng
