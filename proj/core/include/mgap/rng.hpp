#pragma once

#include <array>
#include <cstdint>

namespace mgap {

// Addresses one logical random stream. Streams with distinct keys are
// statistically independent; the same key always reproduces the same draws,
// regardless of how work is split across threads.
struct StreamKey {
  std::uint64_t master_seed = 0;
  std::uint32_t replication_id = 0;
  std::uint32_t lane_id = 0;
};

// Counter-based generator (Philox4x32-10). The key material encodes the
// master seed, the counter block encodes (replication, lane) plus a running
// 64-bit block index, so each stream has 2^64 blocks of 128 bits.
class RandomStream {
 public:
  explicit RandomStream(const StreamKey& key);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  // Uniform on [0,1) with 53 random mantissa bits.
  double uniform01();

  // Standard normal via the Marsaglia polar method (exact, no table or
  // piecewise approximation).
  double normal();

  // Exponential with the given rate.
  double exponential(double rate);

  const StreamKey& key() const { return key_id_; }

 private:
  void refill();

  StreamKey key_id_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> block_{};
  int pos_ = 4;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace mgap
