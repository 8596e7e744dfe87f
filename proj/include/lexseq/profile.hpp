#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lexseq/mastery.hpp"
#include "lexseq/model.hpp"

namespace lexseq {

enum class FeatureStatus { locked, open, mastered };
enum class GameType { accuracy, automaticity };

const char* to_string(FeatureStatus status);
const char* to_string(GameType type);
FeatureStatus feature_status_from_string(const std::string& text);
GameType game_type_from_string(const std::string& text);

// Per-feature learner state. Among non-locked features, mastered is
// equivalent to mastery == max; a demotion re-lock preserves the mastery
// value, so a locked feature may carry any mastery.
struct FeatureState {
  micro_t mastery = 0;
  FeatureStatus status = FeatureStatus::locked;
  std::int64_t times_played = 0;
  std::optional<std::int64_t> last_used_session;
  std::optional<Score> last_score;
  std::int64_t non_improving_streak = 0;

  bool operator==(const FeatureState&) const = default;
};

// The instantiated graph for one student. states covers exactly the model's
// feature ids; session_counter equals the number of results in the log.
struct StudentProfile {
  std::string student_id;
  int year = 1;
  std::string model_language;
  std::map<std::string, FeatureState> states;
  std::int64_t session_counter = 0;

  bool operator==(const StudentProfile&) const = default;
};

// Outcome of one played session. score() is derived from item_outcomes and
// is the only representation used in the update arithmetic.
struct GameResult {
  std::int64_t session_index = 0;
  std::string feature_id;
  GameType game_type = GameType::accuracy;
  std::vector<bool> item_outcomes;
  std::uint64_t seed = 0;

  Score score() const;
  bool operator==(const GameResult&) const = default;
};

// Instantiates the model for a student: features below the student's year
// are assumed mastered at 10.0; at-or-above-year features whose
// prerequisites all surpass the unlock threshold open at 5.0; the rest start
// locked at 0.
StudentProfile init_profile(const LanguageModel& model,
                            const std::string& student_id, int year,
                            const MasteryParams& params = {});

// Opens every locked feature whose prerequisites all surpass the unlock
// threshold. A first-time opening (mastery 0) is initialised to open_init;
// a previously-opened feature keeps its mastery (and re-enters as mastered
// when that mastery is already at max). Returns transitioned ids, ascending.
std::vector<std::string> recompute_status(StudentProfile& profile,
                                          const LanguageModel& model,
                                          const MasteryParams& params = {});

// Bookkeeping for one result: bumps session_counter, times_played,
// last_used_session and last_score. Throws session_index_mismatch unless
// result.session_index == session_counter + 1.
void record_session(StudentProfile& profile, const GameResult& result);

struct DemotionOutcome {
  std::vector<std::string> demoted;   // feature + direct prerequisites, ascending
  std::vector<std::string> relocked;  // never-played features re-gated, ascending

  bool operator==(const DemotionOutcome&) const = default;
};

// Reduces the feature and each direct prerequisite by demotion_amount
// (floored at 0) and resets the feature's streak. A reduced mastered
// prerequisite becomes open again; never-played features whose prerequisites
// no longer surpass the threshold revert to locked. Features that have been
// played keep their status (grandfathered). Throws demotion_not_triggered
// when the streak is below non_improving_limit.
DemotionOutcome apply_demotion(StudentProfile& profile,
                               const LanguageModel& model,
                               const std::string& feature_id,
                               const MasteryParams& params);

// Rebuilds a profile by replaying a result log from init_profile. The log is
// the source of truth for persisted state.
StudentProfile replay_results(const LanguageModel& model,
                              const std::string& student_id, int year,
                              const std::vector<GameResult>& results,
                              const MasteryParams& params);

}  // namespace lexseq
