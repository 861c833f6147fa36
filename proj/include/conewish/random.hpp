#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace conewish {

/// Philox4x32-10 counter-based generator.
///
/// A stream is fixed by (seed, stream index); draws within it walk a 64-bit
/// block counter. Streams with different indices are statistically
/// independent, so replicate k can always be regenerated from (seed, k)
/// regardless of how work is split across threads.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;

  Philox4x32(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (pos_ == 4) {
      block_ = generate(counter_++);
      pos_ = 0;
    }
    return block_[pos_++];
  }

  /// Skips ahead by whole 128-bit blocks.
  void discard_blocks(std::uint64_t n) {
    counter_ += n;
    pos_ = 4;
  }

 private:
  std::array<std::uint32_t, 4> generate(std::uint64_t block) const {
    std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
                                     static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    std::array<std::uint32_t, 2> key = key_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
      key[0] += 0x9E3779B9u;
      key[1] += 0xBB67AE85u;
    }
    return ctr;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int pos_ = 4;
};

using Rng = Philox4x32;

}  // namespace conewish
