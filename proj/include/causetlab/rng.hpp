#pragma once

#include <cstdint>

namespace causetlab {

// 64-bit finalizer (splitmix64 style): bijective, well-mixed.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// Counter-based pseudorandom stream.
//
// Output i of the stream with key K is
//   mix64(K + (i+1) * 0x9E3779B97F4A7C15)
// so any position of any stream is computable independently.  Streams are
// derived from a master seed by stream_key() below; all randomness in the
// project flows through this generator, which makes every artifact
// reproducible from (master_seed, stream index) alone.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~0ull; }

  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64() {
    ctr_ += 0x9E3779B97F4A7C15ull;
    return mix64(key_ + ctr_);
  }

  // Uniform double in [0,1) with 53-bit resolution.
  double next_unit() { return (next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0,n), unbiased (rejection on the incomplete cycle).
  std::uint64_t next_below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t lim = (0 - n) % n;  // 2^64 mod n
    std::uint64_t r = next_u64();
    while (r < lim) r = next_u64();
    return r % n;
  }

  bool bernoulli(double p) { return next_unit() < p; }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
};

// Derives the key of stream `index` from a master seed: two finalizer rounds
// over the pair, with distinct odd constants separating master and index.
inline std::uint64_t stream_key(std::uint64_t master_seed, std::uint64_t index) {
  const std::uint64_t a = mix64(index * 0xD1B54A32D192ED03ull + 0x8CB92BA72F3D8DD7ull);
  return mix64(master_seed ^ a ^ 0x2545F4914F6CDD1Dull);
}

inline Rng seed_stream(std::uint64_t master_seed, std::uint64_t index) {
  return Rng(stream_key(master_seed, index));
}

}  // namespace causetlab
