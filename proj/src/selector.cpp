#include "lexseq/selector.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "lexseq/json_io.hpp"
#include "lexseq/rng.hpp"

namespace lexseq {

const char* to_string(ItemKind kind) {
  return kind == ItemKind::word ? "word" : "sentence";
}

ItemKind item_kind_from_string(const std::string& text) {
  if (text == "word") return ItemKind::word;
  if (text == "sentence") return ItemKind::sentence;
  fail(ErrorCode::malformed_document, "unknown item kind '" + text + "'");
}

bool ContentItem::exercises(const std::string& feature_id) const {
  return std::binary_search(features.begin(), features.end(), feature_id);
}

Lexicon parse_lexicon(const std::string& text, std::string language) {
  json doc = parse_json_text(text, ErrorCode::malformed_document);
  Lexicon lexicon;
  lexicon.language = std::move(language);
  try {
    if (!doc.is_array()) {
      fail(ErrorCode::malformed_document, "lexicon must be a JSON array");
    }
    lexicon.items = doc.get<std::vector<ContentItem>>();
  } catch (const json::exception& e) {
    fail(ErrorCode::malformed_document, std::string("lexicon document: ") + e.what());
  }
  return lexicon;
}

std::string serialize_lexicon(const Lexicon& lexicon) {
  return json(lexicon.items).dump(2) + "\n";
}

std::vector<std::string> lexicon_violations(const Lexicon& lexicon,
                                            const LanguageModel& model) {
  std::vector<std::string> messages;
  for (std::size_t i = 0; i < lexicon.items.size(); ++i) {
    for (const std::string& feature : lexicon.items[i].features) {
      if (!model.contains(feature)) {
        messages.push_back("item " + std::to_string(i + 1) + " '" +
                           lexicon.items[i].text + "' references unknown feature '" +
                           feature + "'");
      }
    }
  }
  return messages;
}

namespace {

// Fixed rule-name vocabulary for rationale entries.
constexpr const char* kRuleCandidatePool = "candidate_pool";
constexpr const char* kRuleReopenPriority = "reopen_priority";
constexpr const char* kRuleRecentFailureDeferred = "recent_failure_deferred";
constexpr const char* kRuleUsageOrder = "usage_order";
constexpr const char* kRuleSelectedFeature = "selected_feature";
constexpr const char* kRuleAccuracyFirst = "game_type_accuracy_first";
constexpr const char* kRuleAutomaticity = "game_type_automaticity";
constexpr const char* kRuleContentSampled = "content_sampled";

std::int64_t staleness_of(const FeatureState& state, std::int64_t counter) {
  return counter - state.last_used_session.value_or(0);
}

// "Not done well with recently": last score below recent_fail and last use
// within the previous recent_window sessions.
bool recently_failed(const FeatureState& state, std::int64_t counter,
                     const MasteryParams& params) {
  if (!state.last_score || !state.last_used_session) return false;
  bool failed = state.last_score->correct * params.recent_fail_den <
                params.recent_fail_num * state.last_score->total;
  bool recent = (counter - *state.last_used_session) < params.recent_window;
  return failed && recent;
}

// Fewest plays, then highest mastery ("start from an easier feature"), then
// stalest (never used counts as infinitely stale), then ascending id.
bool open_order_less(const StudentProfile& profile, const std::string& a,
                     const std::string& b) {
  const FeatureState& sa = profile.states.at(a);
  const FeatureState& sb = profile.states.at(b);
  if (sa.times_played != sb.times_played) {
    return sa.times_played < sb.times_played;
  }
  if (sa.mastery != sb.mastery) return sa.mastery > sb.mastery;
  bool a_never = !sa.last_used_session.has_value();
  bool b_never = !sb.last_used_session.has_value();
  if (a_never != b_never) return a_never;
  if (!a_never) {
    std::int64_t stale_a = profile.session_counter - *sa.last_used_session;
    std::int64_t stale_b = profile.session_counter - *sb.last_used_session;
    if (stale_a != stale_b) return stale_a > stale_b;
  }
  return a < b;
}

std::string join_ids(const std::vector<std::string>& ids) {
  std::ostringstream out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out << ",";
    out << ids[i];
  }
  return out.str();
}

std::vector<std::string> prioritize_traced(const std::vector<Candidate>& pool,
                                           const StudentProfile& profile,
                                           const MasteryParams& params,
                                           std::vector<std::string>* trace) {
  std::optional<std::string> reopen_pick;
  std::vector<std::string> normal;
  std::vector<std::string> deferred;

  for (const Candidate& candidate : pool) {
    if (candidate.pool_class == PoolClass::reopen) {
      // At most one reopened feature per session: the lowest id wins, the
      // rest wait for a later session.
      if (!reopen_pick || candidate.feature_id < *reopen_pick) {
        reopen_pick = candidate.feature_id;
      }
      continue;
    }
    const FeatureState& state = profile.states.at(candidate.feature_id);
    if (recently_failed(state, profile.session_counter, params)) {
      deferred.push_back(candidate.feature_id);
    } else {
      normal.push_back(candidate.feature_id);
    }
  }

  auto by_open_order = [&profile](const std::string& a, const std::string& b) {
    return open_order_less(profile, a, b);
  };
  std::sort(normal.begin(), normal.end(), by_open_order);
  std::sort(deferred.begin(), deferred.end(), by_open_order);

  std::vector<std::string> order;
  if (reopen_pick) {
    order.push_back(*reopen_pick);
    if (trace) trace->push_back(std::string(kRuleReopenPriority) + ": " + *reopen_pick);
  }
  if (trace && !deferred.empty()) {
    trace->push_back(std::string(kRuleRecentFailureDeferred) + ": " + join_ids(deferred));
  }
  order.insert(order.end(), normal.begin(), normal.end());
  order.insert(order.end(), deferred.begin(), deferred.end());
  if (trace && !(normal.empty() && deferred.empty())) {
    std::vector<std::string> open_part(order.begin() + (reopen_pick ? 1 : 0),
                                       order.end());
    trace->push_back(std::string(kRuleUsageOrder) + ": " + join_ids(open_part));
  }
  return order;
}

}  // namespace

const std::vector<std::string>& rule_vocabulary() {
  static const std::vector<std::string> names{
      kRuleCandidatePool,  kRuleReopenPriority, kRuleRecentFailureDeferred,
      kRuleUsageOrder,     kRuleSelectedFeature, kRuleAccuracyFirst,
      kRuleAutomaticity,   kRuleContentSampled};
  return names;
}

std::vector<Candidate> candidate_pool(const StudentProfile& profile,
                                      const LanguageModel& model,
                                      const MasteryParams& params) {
  (void)model;
  std::vector<Candidate> pool;
  for (const auto& [id, state] : profile.states) {
    if (state.status == FeatureStatus::open && state.mastery < params.max_mastery) {
      pool.push_back({id, PoolClass::open_feature});
    } else if (state.status == FeatureStatus::mastered &&
               staleness_of(state, profile.session_counter) >= params.reopen_after) {
      pool.push_back({id, PoolClass::reopen});
    }
  }
  if (pool.empty()) {
    fail(ErrorCode::empty_pool,
         "no playable feature for student '" + profile.student_id + "'");
  }
  return pool;  // map iteration is already ascending by id
}

std::vector<std::string> prioritize(const std::vector<Candidate>& pool,
                                    const StudentProfile& profile,
                                    const MasteryParams& params) {
  return prioritize_traced(pool, profile, params, nullptr);
}

GameType choose_game_type(const FeatureState& state) {
  return state.times_played == 0 ? GameType::accuracy : GameType::automaticity;
}

std::vector<ContentItem> select_content(const Lexicon& lexicon,
                                        const std::string& feature_id,
                                        std::int64_t count, std::uint64_t seed) {
  if (count < 1) {
    fail(ErrorCode::out_of_range, "content count must be >= 1");
  }
  std::vector<std::size_t> matching;
  for (std::size_t i = 0; i < lexicon.items.size(); ++i) {
    if (lexicon.items[i].exercises(feature_id)) matching.push_back(i);
  }
  if (matching.empty()) {
    fail(ErrorCode::no_content,
         "no lexicon items exercise feature '" + feature_id + "'");
  }

  // Partial Fisher-Yates over the matches in file order, driven by
  // SplitMix64(seed); both the generator and this loop are pinned, so the
  // sample is reproducible bit-for-bit.
  std::size_t take = std::min<std::size_t>(matching.size(),
                                           static_cast<std::size_t>(count));
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < take; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(matching.size() - i));
    std::swap(matching[i], matching[j]);
  }

  std::vector<ContentItem> items;
  items.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    items.push_back(lexicon.items[matching[i]]);
  }
  return items;
}

SessionPlan plan_session(const StudentProfile& profile,
                         const LanguageModel& model, const Lexicon& lexicon,
                         const MasteryParams& params, std::uint64_t seed) {
  check_params(params);
  std::vector<Candidate> pool = candidate_pool(profile, model, params);

  SessionPlan plan;
  std::size_t reopen_count = static_cast<std::size_t>(
      std::count_if(pool.begin(), pool.end(), [](const Candidate& c) {
        return c.pool_class == PoolClass::reopen;
      }));
  plan.rationale.push_back(std::string(kRuleCandidatePool) + ": open=" +
                           std::to_string(pool.size() - reopen_count) +
                           " reopen=" + std::to_string(reopen_count));

  std::vector<std::string> order =
      prioritize_traced(pool, profile, params, &plan.rationale);
  const std::string& top = order.front();
  plan.rationale.push_back(std::string(kRuleSelectedFeature) + ": " + top);

  const FeatureState& state = profile.states.at(top);
  plan.game_type = choose_game_type(state);
  plan.rationale.push_back(
      std::string(plan.game_type == GameType::accuracy ? kRuleAccuracyFirst
                                                       : kRuleAutomaticity) +
      ": " + top);

  plan.items = select_content(lexicon, top, params.items_per_session, seed);
  plan.rationale.push_back(std::string(kRuleContentSampled) + ": " +
                           std::to_string(plan.items.size()) + " items for " + top);

  plan.session_index = profile.session_counter + 1;
  plan.feature_id = top;
  plan.seed = seed;
  return plan;
}

TransitionReport apply_result(StudentProfile& profile, const LanguageModel& model,
                              const SessionPlan& plan, const GameResult& result,
                              const MasteryParams& params) {
  if (result.feature_id != plan.feature_id ||
      result.session_index != plan.session_index) {
    fail(ErrorCode::plan_result_mismatch,
         "result (feature '" + result.feature_id + "', session " +
             std::to_string(result.session_index) + ") does not match plan (feature '" +
             plan.feature_id + "', session " + std::to_string(plan.session_index) + ")");
  }
  return apply_result_unchecked(profile, model, result, params);
}

TransitionReport apply_result_unchecked(StudentProfile& profile,
                                        const LanguageModel& model,
                                        const GameResult& result,
                                        const MasteryParams& params) {
  check_params(params);
  record_session(profile, result);

  FeatureState& state = profile.states.at(result.feature_id);
  TransitionReport report;
  report.session_index = result.session_index;
  report.feature_id = result.feature_id;
  report.mastery_before = state.mastery;

  micro_t updated = update_mastery(state.mastery, result.score(), params);
  state.mastery = updated;
  state.status = updated == params.max_mastery ? FeatureStatus::mastered
                                               : FeatureStatus::open;
  state.non_improving_streak =
      update_streak(report.mastery_before, updated, state.non_improving_streak);

  if (state.non_improving_streak >= params.non_improving_limit) {
    DemotionOutcome outcome =
        apply_demotion(profile, model, result.feature_id, params);
    report.demoted = std::move(outcome.demoted);
    report.relocked = std::move(outcome.relocked);
  }

  report.newly_opened = recompute_status(profile, model, params);
  report.mastery_after = state.mastery;
  report.streak = state.non_improving_streak;
  return report;
}

}  // namespace lexseq
