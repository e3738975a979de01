#pragma once

#include <cstdint>

namespace isac {

/// Philox4x32-10 counter-based generator; substreams are cheap and
/// independent, which keeps parallel Monte Carlo runs bit-reproducible.
class Philox {
 public:
  Philox(uint64_t seed, uint64_t stream);

  uint32_t next_u32();
  uint64_t next_u64();
  /// Uniform double in [0, 1) with 53-bit resolution.
  double next_double();
  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi);
  /// Standard normal via Box-Muller.
  double normal();

  /// One raw 4x32 block for a given counter (stateless; used by tests).
  static void block(const uint32_t key[2], const uint32_t counter[4], uint32_t out[4]);

 private:
  void refill();
  uint32_t key_[2];
  uint32_t counter_[4];
  uint32_t buffer_[4];
  int pos_ = 4;
  bool have_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace isac
