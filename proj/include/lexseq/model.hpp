#pragma once

#include <map>
#include <string>
#include <vector>

#include "lexseq/mastery.hpp"

namespace lexseq {

enum class FeatureKind { grapheme, phoneme, morphology, syntax, vocabulary };

const char* to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(const std::string& text);

// One node of the prerequisite graph: an atomic language feature together
// with the school year at which it enters the curriculum.
struct Feature {
  std::string id;
  std::string label;
  FeatureKind kind = FeatureKind::grapheme;
  std::vector<std::string> prerequisites;  // sorted, unique
  int year = 1;

  bool operator==(const Feature&) const = default;
};

// The language/teaching model: a DAG of features plus the unlock threshold
// (micro-units) a prerequisite must surpass before dependents open.
struct LanguageModel {
  std::string language;
  micro_t threshold = 75'000;
  std::map<std::string, Feature> features;

  bool operator==(const LanguageModel&) const = default;

  const Feature& at(const std::string& id) const;
  bool contains(const std::string& id) const { return features.count(id) != 0; }
};

enum class Severity { error, warning };
enum class ViolationKind { cycle_detected, year_inversion };

struct Violation {
  ViolationKind kind = ViolationKind::cycle_detected;
  Severity severity = Severity::error;
  std::vector<std::string> feature_ids;  // cycle members, or {feature, prerequisite}
  std::string message;

  bool operator==(const Violation&) const = default;
};

// Parses the model file format (JSON: language, threshold on the 0-10 scale,
// features array). Enforces per-feature invariants (unique non-empty ids, no
// self-prerequisite, year >= 1, resolvable prerequisites, threshold range);
// cycles are left to validate() so defective models can still be inspected.
LanguageModel parse_model(const std::string& text);

// Deterministic inverse of parse_model: features and prerequisite lists
// sorted by id, threshold back on the 0-10 scale.
std::string serialize_model(const LanguageModel& model);

// Structural checks beyond parsing: cycles (error) and year inversions, i.e.
// a prerequisite introduced in a later year than its dependent (warning).
// The list is deterministically ordered.
std::vector<Violation> validate(const LanguageModel& model);

// Prerequisites-first order, ties broken by ascending feature id (the
// lexicographically smallest valid order). Throws cyclic_model.
std::vector<std::string> topological_order(const LanguageModel& model);

// Length of the longest prerequisite chain ending at the feature; roots are
// at depth 0. Throws unknown_feature / cyclic_model.
int depth(const LanguageModel& model, const std::string& feature_id);

}  // namespace lexseq
