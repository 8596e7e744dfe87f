#pragma once

#include <cstdint>
#include <string_view>

namespace lexseq {

// SplitMix64. The exact sequence is part of the engine's reproducibility
// contract: content sampling, simulated students and default seeds all come
// from this generator, so the constants below must never change.
//
//   state' = state + 0x9E3779B97F4A7C15
//   z = state'; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   output = z ^ (z >> 31)
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1): top 53 bits scaled by 2^-53.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Bounded draw in [0, n) by modulo. The bias is immaterial for the pool
  // sizes involved and keeps the sequence trivial to reproduce elsewhere.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

// Output of the (steps+1)-th draw of SplitMix64(seed), computed statelessly.
// Used to derive per-student sub-seeds so cohort results do not depend on
// evaluation order.
std::uint64_t splitmix_jump(std::uint64_t seed, std::uint64_t steps);

// FNV-1a 64-bit (offset 14695981039346656037, prime 1099511628211).
std::uint64_t fnv1a64(std::string_view text);

// Seed used when a caller plans a session without supplying one:
// splitmix_jump(fnv1a64(student_id), session_index). Reproducible without
// any server-side state.
std::uint64_t default_plan_seed(std::string_view student_id,
                                std::int64_t session_index);

}  // namespace lexseq
