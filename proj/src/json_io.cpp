#include "lexseq/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace lexseq {

json parse_json_text(const std::string& text, ErrorCode code) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    fail(code, "invalid JSON document");
  }
  return doc;
}

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace

void to_json(json& j, const Feature& feature) {
  j = json{{"id", feature.id},
           {"label", feature.label},
           {"kind", to_string(feature.kind)},
           {"year", feature.year},
           {"prerequisites", feature.prerequisites}};
}

void from_json(const json& j, Feature& feature) {
  feature.id = j.at("id").get<std::string>();
  feature.label = j.value("label", feature.id);
  feature.kind = feature_kind_from_string(j.at("kind").get<std::string>());
  feature.year = j.at("year").get<int>();
  feature.prerequisites =
      sorted_unique(j.value("prerequisites", std::vector<std::string>{}));
}

void to_json(json& j, const Score& score) {
  j = json{{"correct", score.correct}, {"total", score.total}};
}

void from_json(const json& j, Score& score) {
  score.correct = j.at("correct").get<std::int64_t>();
  score.total = j.at("total").get<std::int64_t>();
}

void to_json(json& j, const FeatureState& state) {
  j = json{{"mastery", state.mastery},
           {"status", to_string(state.status)},
           {"times_played", state.times_played},
           {"non_improving_streak", state.non_improving_streak}};
  j["last_used_session"] =
      state.last_used_session ? json(*state.last_used_session) : json(nullptr);
  j["last_score"] = state.last_score ? json(*state.last_score) : json(nullptr);
}

void from_json(const json& j, FeatureState& state) {
  state.mastery = j.at("mastery").get<micro_t>();
  state.status = feature_status_from_string(j.at("status").get<std::string>());
  state.times_played = j.at("times_played").get<std::int64_t>();
  state.non_improving_streak = j.at("non_improving_streak").get<std::int64_t>();
  const json& used = j.at("last_used_session");
  state.last_used_session =
      used.is_null() ? std::nullopt : std::optional(used.get<std::int64_t>());
  const json& score = j.at("last_score");
  state.last_score =
      score.is_null() ? std::nullopt : std::optional(score.get<Score>());
}

void to_json(json& j, const StudentProfile& profile) {
  j = json{{"student_id", profile.student_id},
           {"year", profile.year},
           {"model_language", profile.model_language},
           {"session_counter", profile.session_counter},
           {"states", profile.states}};
}

void from_json(const json& j, StudentProfile& profile) {
  profile.student_id = j.at("student_id").get<std::string>();
  profile.year = j.at("year").get<int>();
  profile.model_language = j.at("model_language").get<std::string>();
  profile.session_counter = j.at("session_counter").get<std::int64_t>();
  profile.states = j.at("states").get<std::map<std::string, FeatureState>>();
}

void to_json(json& j, const GameResult& result) {
  Score score = result.score();
  j = json{{"session_index", result.session_index},
           {"feature_id", result.feature_id},
           {"game_type", to_string(result.game_type)},
           {"item_outcomes", result.item_outcomes},
           {"score", score.value()},
           {"seed", result.seed}};
}

void from_json(const json& j, GameResult& result) {
  result.session_index = j.at("session_index").get<std::int64_t>();
  result.feature_id = j.at("feature_id").get<std::string>();
  result.game_type = game_type_from_string(j.at("game_type").get<std::string>());
  result.item_outcomes = j.at("item_outcomes").get<std::vector<bool>>();
  result.seed = j.at("seed").get<std::uint64_t>();
  if (result.item_outcomes.empty()) {
    fail(ErrorCode::malformed_document, "item_outcomes must be non-empty");
  }
  if (j.contains("score")) {
    // The stored score is derived data; reject records that disagree with
    // their own outcomes.
    double declared = j.at("score").get<double>();
    if (std::fabs(declared - result.score().value()) > 1e-9) {
      fail(ErrorCode::malformed_document,
           "score does not match item_outcomes");
    }
  }
}

void to_json(json& j, const ContentItem& item) {
  j = json{{"text", item.text},
           {"kind", to_string(item.kind)},
           {"features", item.features},
           {"difficulty", item.difficulty}};
}

void from_json(const json& j, ContentItem& item) {
  item.text = j.at("text").get<std::string>();
  item.kind = item_kind_from_string(j.at("kind").get<std::string>());
  item.features = sorted_unique(j.at("features").get<std::vector<std::string>>());
  item.difficulty = j.value("difficulty", 1);
  if (item.text.empty()) {
    fail(ErrorCode::malformed_document, "content item text must be non-empty");
  }
  if (item.features.empty()) {
    fail(ErrorCode::malformed_document,
         "content item '" + item.text + "' must exercise at least one feature");
  }
  if (item.difficulty < 1 || item.difficulty > 5) {
    fail(ErrorCode::malformed_document,
         "content item '" + item.text + "' difficulty must be 1..5");
  }
}

void to_json(json& j, const SessionPlan& plan) {
  j = json{{"session_index", plan.session_index},
           {"feature_id", plan.feature_id},
           {"game_type", to_string(plan.game_type)},
           {"items", plan.items},
           {"seed", plan.seed},
           {"rationale", plan.rationale}};
}

void from_json(const json& j, SessionPlan& plan) {
  plan.session_index = j.at("session_index").get<std::int64_t>();
  plan.feature_id = j.at("feature_id").get<std::string>();
  plan.game_type = game_type_from_string(j.at("game_type").get<std::string>());
  plan.items = j.at("items").get<std::vector<ContentItem>>();
  plan.seed = j.at("seed").get<std::uint64_t>();
  plan.rationale = j.value("rationale", std::vector<std::string>{});
}

void to_json(json& j, const TransitionReport& report) {
  j = json{{"session_index", report.session_index},
           {"feature_id", report.feature_id},
           {"mastery_before", report.mastery_before},
           {"mastery_after", report.mastery_after},
           {"mastery_delta", report.mastery_after - report.mastery_before},
           {"streak", report.streak},
           {"demoted", report.demoted},
           {"relocked", report.relocked},
           {"newly_opened", report.newly_opened}};
}

void from_json(const json& j, TransitionReport& report) {
  report.session_index = j.at("session_index").get<std::int64_t>();
  report.feature_id = j.at("feature_id").get<std::string>();
  report.mastery_before = j.at("mastery_before").get<micro_t>();
  report.mastery_after = j.at("mastery_after").get<micro_t>();
  report.streak = j.at("streak").get<std::int64_t>();
  report.demoted = j.value("demoted", std::vector<std::string>{});
  report.relocked = j.value("relocked", std::vector<std::string>{});
  report.newly_opened = j.value("newly_opened", std::vector<std::string>{});
}

void to_json(json& j, const MasteryParams& params) {
  j = json{{"alpha_num", params.alpha_num},
           {"alpha_den", params.alpha_den},
           {"snap_threshold", params.snap_threshold},
           {"max_drop", params.max_drop},
           {"demotion_amount", params.demotion_amount},
           {"reopen_after", params.reopen_after},
           {"non_improving_limit", params.non_improving_limit},
           {"open_init", params.open_init},
           {"max_mastery", params.max_mastery},
           {"unlock_threshold", params.unlock_threshold},
           {"recent_window", params.recent_window},
           {"recent_fail_num", params.recent_fail_num},
           {"recent_fail_den", params.recent_fail_den},
           {"items_per_session", params.items_per_session}};
}

void apply_params_json(MasteryParams& params, const json& j) {
  if (!j.is_object()) {
    fail(ErrorCode::malformed_document, "params must be a JSON object");
  }
  params.alpha_num = j.value("alpha_num", params.alpha_num);
  params.alpha_den = j.value("alpha_den", params.alpha_den);
  params.snap_threshold = j.value("snap_threshold", params.snap_threshold);
  params.max_drop = j.value("max_drop", params.max_drop);
  params.demotion_amount = j.value("demotion_amount", params.demotion_amount);
  params.reopen_after = j.value("reopen_after", params.reopen_after);
  params.non_improving_limit =
      j.value("non_improving_limit", params.non_improving_limit);
  params.open_init = j.value("open_init", params.open_init);
  params.max_mastery = j.value("max_mastery", params.max_mastery);
  params.unlock_threshold = j.value("unlock_threshold", params.unlock_threshold);
  params.recent_window = j.value("recent_window", params.recent_window);
  params.recent_fail_num = j.value("recent_fail_num", params.recent_fail_num);
  params.recent_fail_den = j.value("recent_fail_den", params.recent_fail_den);
  params.items_per_session =
      j.value("items_per_session", params.items_per_session);
  check_params(params);
}

void to_json(json& j, const ParamDist& dist) {
  if (dist.kind == ParamDist::Kind::constant) {
    j = json{{"kind", "constant"}, {"value", dist.value}};
  } else {
    j = json{{"kind", "uniform"}, {"min", dist.min}, {"max", dist.max}};
  }
}

void from_json(const json& j, ParamDist& dist) {
  if (j.is_number()) {  // shorthand: a bare number is a constant
    dist.kind = ParamDist::Kind::constant;
    dist.value = j.get<double>();
    return;
  }
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") {
    dist.kind = ParamDist::Kind::constant;
    dist.value = j.at("value").get<double>();
  } else if (kind == "uniform") {
    dist.kind = ParamDist::Kind::uniform;
    dist.min = j.at("min").get<double>();
    dist.max = j.at("max").get<double>();
  } else {
    fail(ErrorCode::malformed_document, "unknown distribution kind '" + kind + "'");
  }
}

void to_json(json& j, const CohortSpec& spec) {
  j = json{{"size", spec.size},
           {"year", spec.year},
           {"n_sessions", spec.n_sessions},
           {"skill", spec.skill},
           {"learning_rate", spec.learning_rate},
           {"id_prefix", spec.id_prefix}};
}

void from_json(const json& j, CohortSpec& spec) {
  spec.size = j.at("size").get<std::int64_t>();
  spec.year = j.value("year", 1);
  spec.n_sessions = j.at("n_sessions").get<std::int64_t>();
  spec.skill = j.at("skill").get<ParamDist>();
  if (j.contains("learning_rate")) {
    spec.learning_rate = j.at("learning_rate").get<ParamDist>();
  }
  spec.id_prefix = j.value("id_prefix", std::string("s"));
  if (spec.size < 1 || spec.n_sessions < 1) {
    fail(ErrorCode::malformed_document, "cohort size and n_sessions must be >= 1");
  }
}

void to_json(json& j, const StudentSummary& summary) {
  j = json{{"student_id", summary.student_id},
           {"sessions_run", summary.sessions_run},
           {"starved", summary.starved},
           {"starved_reason", summary.starved_reason},
           {"demotion_events", summary.demotion_events},
           {"opened_at", summary.opened_at},
           {"mastered_at", summary.mastered_at},
           {"plays_to_mastery", summary.plays_to_mastery},
           {"final_mastery", summary.final_mastery}};
}

void to_json(json& j, const FeatureAggregate& aggregate) {
  j = json{{"mastered_count", aggregate.mastered_count},
           {"mastery_session_p50", aggregate.mastery_session_p50},
           {"mastery_session_p90", aggregate.mastery_session_p90},
           {"mastery_session_max", aggregate.mastery_session_max}};
}

void to_json(json& j, const CohortReport& report) {
  j = json{{"cohort_size", report.cohort_size},
           {"n_sessions", report.n_sessions},
           {"master_seed", report.master_seed},
           {"starvation_total", report.starvation_total},
           {"demotion_total", report.demotion_total},
           {"students", report.students},
           {"feature_aggregates", report.feature_aggregates}};
}

std::string format_mastery(micro_t mastery) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%lld.%04lld/10",
                static_cast<long long>(mastery / kMicroPerPoint),
                static_cast<long long>(mastery % kMicroPerPoint));
  return buffer;
}

}  // namespace lexseq
