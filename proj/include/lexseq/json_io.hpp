#pragma once

// JSON bindings for every wire/file type. nlohmann::json keeps object keys
// sorted, so every serialization in the project is deterministic.

#include <json.hpp>

#include "lexseq/mastery.hpp"
#include "lexseq/model.hpp"
#include "lexseq/profile.hpp"
#include "lexseq/selector.hpp"
#include "lexseq/sim.hpp"

namespace lexseq {

using json = nlohmann::json;

// Parses text, mapping any syntax error to an EngineError with `code`.
json parse_json_text(const std::string& text, ErrorCode code);

void to_json(json& j, const Feature& feature);
void from_json(const json& j, Feature& feature);

void to_json(json& j, const Score& score);
void from_json(const json& j, Score& score);

void to_json(json& j, const FeatureState& state);
void from_json(const json& j, FeatureState& state);

void to_json(json& j, const StudentProfile& profile);
void from_json(const json& j, StudentProfile& profile);

void to_json(json& j, const GameResult& result);
void from_json(const json& j, GameResult& result);

void to_json(json& j, const ContentItem& item);
void from_json(const json& j, ContentItem& item);

void to_json(json& j, const SessionPlan& plan);
void from_json(const json& j, SessionPlan& plan);

void to_json(json& j, const TransitionReport& report);
void from_json(const json& j, TransitionReport& report);

void to_json(json& j, const MasteryParams& params);
// Overlay semantics: only the fields present in j change.
void apply_params_json(MasteryParams& params, const json& j);

void to_json(json& j, const ParamDist& dist);
void from_json(const json& j, ParamDist& dist);

void to_json(json& j, const CohortSpec& spec);
void from_json(const json& j, CohortSpec& spec);

void to_json(json& j, const StudentSummary& summary);
void to_json(json& j, const FeatureAggregate& aggregate);
void to_json(json& j, const CohortReport& report);

// "8.3333/10" style rendering of a micro-unit mastery value.
std::string format_mastery(micro_t mastery);

}  // namespace lexseq
