#include "lexseq/mastery.hpp"

#include <algorithm>
#include <string>

namespace lexseq {

void check_params(const MasteryParams& p) {
  if (p.alpha_den <= 0 || p.alpha_num <= 0 || p.alpha_num > p.alpha_den) {
    fail(ErrorCode::out_of_range, "alpha must satisfy 0 < alpha_num/alpha_den <= 1");
  }
  if (p.max_mastery <= 0 || p.snap_threshold < 0 || p.snap_threshold > p.max_mastery) {
    fail(ErrorCode::out_of_range, "snap_threshold must lie in [0, max_mastery]");
  }
  if (p.max_drop < 0 || p.demotion_amount < 0 || p.open_init < 0 ||
      p.unlock_threshold < 0) {
    fail(ErrorCode::out_of_range, "mastery amounts must be >= 0");
  }
  if (p.reopen_after < 0 || p.non_improving_limit < 0 || p.recent_window < 0) {
    fail(ErrorCode::out_of_range, "session horizons must be >= 0");
  }
  if (p.recent_fail_den <= 0 || p.recent_fail_num < 0) {
    fail(ErrorCode::out_of_range, "recent-failure threshold must be a valid fraction");
  }
  if (p.items_per_session < 1) {
    fail(ErrorCode::out_of_range, "items_per_session must be >= 1");
  }
}

namespace {

std::int64_t div_rhe_128(__int128 num, __int128 den) {
  __int128 quotient = num / den;
  __int128 remainder = num - quotient * den;
  if (2 * remainder > den) {
    ++quotient;
  } else if (2 * remainder == den && (quotient & 1) != 0) {
    ++quotient;
  }
  return static_cast<std::int64_t>(quotient);
}

}  // namespace

std::int64_t div_round_half_even(std::int64_t num, std::int64_t den) {
  if (den <= 0 || num < 0) {
    fail(ErrorCode::out_of_range, "div_round_half_even requires num >= 0, den > 0");
  }
  return div_rhe_128(num, den);
}

micro_t update_mastery(micro_t mastery, Score score, const MasteryParams& params) {
  check_params(params);
  if (mastery < 0 || mastery > params.max_mastery) {
    fail(ErrorCode::out_of_range,
         "mastery " + std::to_string(mastery) + " outside [0, " +
             std::to_string(params.max_mastery) + "]");
  }
  if (score.total < 1 || score.correct < 0 || score.correct > score.total) {
    fail(ErrorCode::out_of_range, "score must be a fraction correct/total in [0, 1]");
  }

  // alpha * (score * max) + (1 - alpha) * m, as one exact rational.
  __int128 num = static_cast<__int128>(params.alpha_num) * score.correct *
                     params.max_mastery +
                 static_cast<__int128>(params.alpha_den - params.alpha_num) *
                     mastery * score.total;
  __int128 den = static_cast<__int128>(params.alpha_den) * score.total;
  micro_t raw = div_rhe_128(num, den);

  micro_t clamped = std::max(raw, mastery - params.max_drop);
  micro_t capped = std::min(clamped, params.max_mastery);
  return capped >= params.snap_threshold ? params.max_mastery : capped;
}

std::int64_t update_streak(micro_t prev_mastery, micro_t new_mastery,
                           std::int64_t streak) {
  return new_mastery <= prev_mastery ? streak + 1 : 0;
}

}  // namespace lexseq
