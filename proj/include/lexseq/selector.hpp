#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lexseq/profile.hpp"

namespace lexseq {

enum class ItemKind { word, sentence };

const char* to_string(ItemKind kind);
ItemKind item_kind_from_string(const std::string& text);

// A word or sentence annotated with the features it exercises.
struct ContentItem {
  std::string text;
  ItemKind kind = ItemKind::word;
  std::vector<std::string> features;  // sorted, unique
  int difficulty = 1;                 // 1..5

  bool exercises(const std::string& feature_id) const;
  bool operator==(const ContentItem&) const = default;
};

struct Lexicon {
  std::string language;
  std::vector<ContentItem> items;

  bool operator==(const Lexicon&) const = default;
};

// Lexicon file format: a JSON array of ContentItem objects. The language tag
// is adopted from the model the lexicon is paired with.
Lexicon parse_lexicon(const std::string& text, std::string language = {});
std::string serialize_lexicon(const Lexicon& lexicon);

// One message per item referencing a feature id absent from the model,
// deterministically ordered.
std::vector<std::string> lexicon_violations(const Lexicon& lexicon,
                                            const LanguageModel& model);

enum class PoolClass { open_feature, reopen };

struct Candidate {
  std::string feature_id;
  PoolClass pool_class = PoolClass::open_feature;

  bool operator==(const Candidate&) const = default;
};

// One planned play unit.
struct SessionPlan {
  std::int64_t session_index = 0;
  std::string feature_id;
  GameType game_type = GameType::accuracy;
  std::vector<ContentItem> items;
  std::uint64_t seed = 0;
  std::vector<std::string> rationale;  // "<rule>: detail" entries, in firing order

  bool operator==(const SessionPlan&) const = default;
};

// What one applied result changed.
struct TransitionReport {
  std::int64_t session_index = 0;
  std::string feature_id;
  micro_t mastery_before = 0;
  micro_t mastery_after = 0;  // final value, after any demotion
  std::int64_t streak = 0;    // final value, 0 when demotion fired
  std::vector<std::string> demoted;
  std::vector<std::string> relocked;
  std::vector<std::string> newly_opened;

  bool operator==(const TransitionReport&) const = default;
};

// Fixed vocabulary of rationale rule names, for log audits.
const std::vector<std::string>& rule_vocabulary();

// Playable features, ascending by id: every open feature, plus every
// mastered feature whose staleness (sessions since last use; profile age for
// never-used ones) has reached reopen_after. Throws empty_pool when nothing
// is playable.
std::vector<Candidate> candidate_pool(const StudentProfile& profile,
                                      const LanguageModel& model,
                                      const MasteryParams& params);

// Deterministic total order over the pool:
//   1. one reopened feature (lowest id) goes first, at most one per session;
//   2. open features failed recently (score < 1/2 within recent_window
//      sessions) move to the back;
//   3. the rest sort by fewest plays, then highest mastery, then stalest
//      (never used = stalest), then ascending id.
std::vector<std::string> prioritize(const std::vector<Candidate>& pool,
                                    const StudentProfile& profile,
                                    const MasteryParams& params);

// Accuracy for a feature's first-ever game, automaticity afterwards.
GameType choose_game_type(const FeatureState& state);

// Seeded sample without replacement (SplitMix64 partial Fisher-Yates, in
// lexicon file order) of items exercising the feature. Returns all matches
// when fewer than count exist. Throws no_content when none do.
std::vector<ContentItem> select_content(const Lexicon& lexicon,
                                        const std::string& feature_id,
                                        std::int64_t count, std::uint64_t seed);

// The composed pipeline: pool -> prioritize -> game type -> content. Pure
// function of its arguments.
SessionPlan plan_session(const StudentProfile& profile,
                         const LanguageModel& model, const Lexicon& lexicon,
                         const MasteryParams& params, std::uint64_t seed);

// Applies a result that matches the plan (feature id and session index):
// record, EMA update, streak update, demotion when triggered, unlock pass.
TransitionReport apply_result(StudentProfile& profile,
                              const LanguageModel& model,
                              const SessionPlan& plan, const GameResult& result,
                              const MasteryParams& params);

// Same pipeline without the plan check; the replay path.
TransitionReport apply_result_unchecked(StudentProfile& profile,
                                        const LanguageModel& model,
                                        const GameResult& result,
                                        const MasteryParams& params);

}  // namespace lexseq
