#include "lexseq/profile.hpp"

#include <algorithm>

#include "lexseq/selector.hpp"

namespace lexseq {

const char* to_string(FeatureStatus status) {
  switch (status) {
    case FeatureStatus::locked: return "locked";
    case FeatureStatus::open: return "open";
    case FeatureStatus::mastered: return "mastered";
  }
  return "locked";
}

FeatureStatus feature_status_from_string(const std::string& text) {
  if (text == "locked") return FeatureStatus::locked;
  if (text == "open") return FeatureStatus::open;
  if (text == "mastered") return FeatureStatus::mastered;
  fail(ErrorCode::malformed_document, "unknown feature status '" + text + "'");
}

const char* to_string(GameType type) {
  return type == GameType::accuracy ? "accuracy" : "automaticity";
}

GameType game_type_from_string(const std::string& text) {
  if (text == "accuracy") return GameType::accuracy;
  if (text == "automaticity") return GameType::automaticity;
  fail(ErrorCode::malformed_document, "unknown game type '" + text + "'");
}

Score GameResult::score() const {
  Score s;
  s.correct = static_cast<std::int64_t>(
      std::count(item_outcomes.begin(), item_outcomes.end(), true));
  s.total = static_cast<std::int64_t>(item_outcomes.size());
  if (s.total == 0) s.total = 1;
  return s;
}

namespace {

bool prerequisites_surpass(const StudentProfile& profile, const Feature& feature,
                           micro_t threshold) {
  for (const std::string& prereq : feature.prerequisites) {
    auto it = profile.states.find(prereq);
    if (it == profile.states.end() || it->second.mastery <= threshold) {
      return false;
    }
  }
  return true;
}

}  // namespace

StudentProfile init_profile(const LanguageModel& model,
                            const std::string& student_id, int year,
                            const MasteryParams& params) {
  if (year < 1) {
    fail(ErrorCode::invalid_year, "school year must be >= 1, got " +
                                      std::to_string(year));
  }
  check_params(params);

  StudentProfile profile;
  profile.student_id = student_id;
  profile.year = year;
  profile.model_language = model.language;

  for (const auto& [id, feature] : model.features) {
    FeatureState state;
    if (feature.year < year) {
      // Below the student's year: assumed already mastered.
      state.mastery = params.max_mastery;
      state.status = FeatureStatus::mastered;
    } else {
      // Masteries at init are fixed by the year rule, so the unlock check
      // reduces to: every prerequisite is below-year.
      bool unlocked = true;
      for (const std::string& prereq : feature.prerequisites) {
        micro_t prereq_mastery =
            model.features.at(prereq).year < year ? params.max_mastery : 0;
        if (prereq_mastery <= params.unlock_threshold) {
          unlocked = false;
          break;
        }
      }
      if (unlocked) {
        state.mastery = params.open_init;
        state.status = FeatureStatus::open;
      }
    }
    profile.states.emplace(id, state);
  }
  return profile;
}

std::vector<std::string> recompute_status(StudentProfile& profile,
                                          const LanguageModel& model,
                                          const MasteryParams& params) {
  std::vector<std::string> opened;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& [id, state] : profile.states) {
      if (state.status != FeatureStatus::locked) continue;
      if (!model.contains(id) ||
          !prerequisites_surpass(profile, model.at(id), params.unlock_threshold)) {
        continue;
      }
      state.status = state.mastery == params.max_mastery ? FeatureStatus::mastered
                                                         : FeatureStatus::open;
      if (state.mastery == 0) state.mastery = params.open_init;
      opened.push_back(id);
      changed = true;
    }
  }
  std::sort(opened.begin(), opened.end());
  return opened;
}

void record_session(StudentProfile& profile, const GameResult& result) {
  if (result.session_index != profile.session_counter + 1) {
    fail(ErrorCode::session_index_mismatch,
         "result session_index " + std::to_string(result.session_index) +
             " does not follow session_counter " +
             std::to_string(profile.session_counter));
  }
  auto it = profile.states.find(result.feature_id);
  if (it == profile.states.end()) {
    fail(ErrorCode::unknown_feature,
         "unknown feature '" + result.feature_id + "'");
  }
  if (result.item_outcomes.empty()) {
    fail(ErrorCode::out_of_range, "a result must contain at least one item");
  }
  profile.session_counter += 1;
  it->second.times_played += 1;
  it->second.last_used_session = result.session_index;
  it->second.last_score = result.score();
}

DemotionOutcome apply_demotion(StudentProfile& profile,
                               const LanguageModel& model,
                               const std::string& feature_id,
                               const MasteryParams& params) {
  auto it = profile.states.find(feature_id);
  if (it == profile.states.end()) {
    fail(ErrorCode::unknown_feature, "unknown feature '" + feature_id + "'");
  }
  if (it->second.non_improving_streak < params.non_improving_limit) {
    fail(ErrorCode::demotion_not_triggered,
         "feature '" + feature_id + "' streak " +
             std::to_string(it->second.non_improving_streak) + " below limit " +
             std::to_string(params.non_improving_limit));
  }

  DemotionOutcome outcome;
  outcome.demoted = model.at(feature_id).prerequisites;
  outcome.demoted.push_back(feature_id);
  std::sort(outcome.demoted.begin(), outcome.demoted.end());
  outcome.demoted.erase(
      std::unique(outcome.demoted.begin(), outcome.demoted.end()),
      outcome.demoted.end());

  for (const std::string& id : outcome.demoted) {
    FeatureState& state = profile.states.at(id);
    state.mastery = std::max<micro_t>(0, state.mastery - params.demotion_amount);
    if (state.status == FeatureStatus::mastered &&
        state.mastery < params.max_mastery) {
      state.status = FeatureStatus::open;  // revisitable again
    }
  }
  it->second.non_improving_streak = 0;

  // Never-played features whose gate no longer holds are re-locked; played
  // ones are grandfathered so the pool cannot be stranded.
  for (auto& [id, state] : profile.states) {
    if (state.status == FeatureStatus::locked || state.times_played > 0) {
      continue;
    }
    if (!prerequisites_surpass(profile, model.at(id), params.unlock_threshold)) {
      state.status = FeatureStatus::locked;
      outcome.relocked.push_back(id);
    }
  }
  return outcome;
}

StudentProfile replay_results(const LanguageModel& model,
                              const std::string& student_id, int year,
                              const std::vector<GameResult>& results,
                              const MasteryParams& params) {
  StudentProfile profile = init_profile(model, student_id, year, params);
  for (const GameResult& result : results) {
    apply_result_unchecked(profile, model, result, params);
  }
  return profile;
}

}  // namespace lexseq
