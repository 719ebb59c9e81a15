#ifndef FODSID_RNG_HPP
#define FODSID_RNG_HPP

#include <array>
#include <cstdint>

namespace fodsid {

/**
 * Philox4x32-10 counter-based generator (Salmon et al., SC'11).
 *
 * The output is a pure function of (key, counter), so any draw of any stream
 * can be regenerated without replaying earlier draws. Streams are separated
 * through the upper counter words: word 2 carries the trajectory index and
 * word 3 the stream purpose.
 */
class Philox4x32 {
public:
  using Block = std::array<std::uint32_t, 4>;

  explicit Philox4x32(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  Block operator()(Block counter) const {
    std::array<std::uint32_t, 2> key = key_;
    for (int round = 0; round < 10; ++round) {
      counter = single_round(counter, key);
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return counter;
  }

private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static Block single_round(const Block& c, const std::array<std::uint32_t, 2>& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }

  std::array<std::uint32_t, 2> key_;
};

/// Purpose tags occupying counter word 3.
enum class StreamPurpose : std::uint32_t { process_noise = 0, input = 1 };

/**
 * Standard-normal stream over Philox.
 *
 * Each counter value yields two 53-bit uniforms u1 in (0, 1], u2 in [0, 1),
 * mapped by Box-Muller to r cos(2 pi u2) and r sin(2 pi u2) with
 * r = sqrt(-2 ln u1). Draw q of a stream is the (q mod 2)-th output of
 * counter q / 2, so the sequence is fully determined by (seed, index, purpose).
 */
class NormalStream {
public:
  NormalStream(std::uint64_t seed, std::uint32_t trajectory_index, StreamPurpose purpose)
      : gen_(seed), index_(trajectory_index), purpose_(static_cast<std::uint32_t>(purpose)) {}

  double next();

  /// Uniform pair for counter value `block`; exposed for tests.
  std::array<double, 2> uniforms(std::uint64_t block) const;

private:
  Philox4x32 gen_;
  std::uint32_t index_;
  std::uint32_t purpose_;
  std::uint64_t block_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fodsid

#endif  // FODSID_RNG_HPP
