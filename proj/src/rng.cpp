#include "lexseq/rng.hpp"

namespace lexseq {

std::uint64_t splitmix_jump(std::uint64_t seed, std::uint64_t steps) {
  SplitMix64 gen(seed + steps * 0x9E3779B97F4A7C15ull);
  return gen.next();
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::uint64_t default_plan_seed(std::string_view student_id,
                                std::int64_t session_index) {
  return splitmix_jump(fnv1a64(student_id),
                       static_cast<std::uint64_t>(session_index));
}

}  // namespace lexseq
