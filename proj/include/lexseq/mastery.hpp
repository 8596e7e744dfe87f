#pragma once

#include <cstdint>

#include "lexseq/errors.hpp"

namespace lexseq {

// Mastery lives on a 0..10 scale but is stored as a fixed-point integer in
// micro-units (10'000 per point, 100'000 == full mastery). All rule
// arithmetic is integer arithmetic so results are bit-identical across
// platforms and implementations.
using micro_t = std::int64_t;

inline constexpr micro_t kMaxMastery = 100'000;
inline constexpr micro_t kMicroPerPoint = 10'000;

// A game score as the exact rational correct/total. Scores are never stored
// as floating point on the update path; the division happens once, inside
// update_mastery, with round-half-even.
struct Score {
  std::int64_t correct = 0;
  std::int64_t total = 1;

  double value() const {
    return static_cast<double>(correct) / static_cast<double>(total);
  }
  bool operator==(const Score&) const = default;
};

// Tunables for the update and selection rules. Defaults encode the engine's
// reference behaviour: unlock above 7.5, open at 5.0, at most 1.0 lost per
// session, full mastery snapped from 9.75, two non-improving attempts
// trigger demotion, mastered features go stale after ten sessions.
struct MasteryParams {
  std::int64_t alpha_num = 2;   // EMA smoothing factor as an exact rational
  std::int64_t alpha_den = 3;
  micro_t snap_threshold = 97'500;
  micro_t max_drop = 10'000;
  micro_t demotion_amount = 10'000;
  std::int64_t reopen_after = 10;
  std::int64_t non_improving_limit = 2;
  micro_t open_init = 50'000;
  micro_t max_mastery = kMaxMastery;
  micro_t unlock_threshold = 75'000;

  // Selection-rule knobs.
  std::int64_t recent_window = 2;      // "recently" = within this many sessions
  std::int64_t recent_fail_num = 1;    // "not done well" = score < 1/2
  std::int64_t recent_fail_den = 2;
  std::int64_t items_per_session = 7;

  bool operator==(const MasteryParams&) const = default;
};

// Throws out_of_range when a params combination violates its invariants
// (alpha in (0,1], snap_threshold <= max_mastery, amounts >= 0, ...).
void check_params(const MasteryParams& params);

// Banker's rounding of num/den for num >= 0, den > 0.
std::int64_t div_round_half_even(std::int64_t num, std::int64_t den);

// One EMA step:
//   target  = score * max_mastery                (exact rational)
//   raw     = round_half_even(alpha * target + (1 - alpha) * mastery)
//   clamped = max(raw, mastery - max_drop)       (bounded loss per session)
//   capped  = min(clamped, max_mastery)
//   result  = max_mastery if capped >= snap_threshold else capped
micro_t update_mastery(micro_t mastery, Score score, const MasteryParams& params);

// Non-improvement streak: +1 when new <= prev (an unchanged value counts as
// not improving), reset to 0 on any strict improvement.
std::int64_t update_streak(micro_t prev_mastery, micro_t new_mastery,
                           std::int64_t streak);

}  // namespace lexseq
