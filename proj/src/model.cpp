#include "lexseq/model.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>

#include "lexseq/json_io.hpp"

namespace lexseq {

const char* to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::grapheme: return "grapheme";
    case FeatureKind::phoneme: return "phoneme";
    case FeatureKind::morphology: return "morphology";
    case FeatureKind::syntax: return "syntax";
    case FeatureKind::vocabulary: return "vocabulary";
  }
  return "grapheme";
}

FeatureKind feature_kind_from_string(const std::string& text) {
  if (text == "grapheme") return FeatureKind::grapheme;
  if (text == "phoneme") return FeatureKind::phoneme;
  if (text == "morphology") return FeatureKind::morphology;
  if (text == "syntax") return FeatureKind::syntax;
  if (text == "vocabulary") return FeatureKind::vocabulary;
  fail(ErrorCode::malformed_document, "unknown feature kind '" + text + "'");
}

const Feature& LanguageModel::at(const std::string& id) const {
  auto it = features.find(id);
  if (it == features.end()) {
    fail(ErrorCode::unknown_feature, "unknown feature '" + id + "'");
  }
  return it->second;
}

LanguageModel parse_model(const std::string& text) {
  json doc = parse_json_text(text, ErrorCode::malformed_document);

  LanguageModel model;
  try {
    model.language = doc.at("language").get<std::string>();
    if (!doc.at("threshold").is_number()) {
      fail(ErrorCode::invalid_threshold, "threshold must be a number");
    }
    double threshold = doc.at("threshold").get<double>();
    if (!(threshold >= 0.0 && threshold <= 10.0)) {
      fail(ErrorCode::invalid_threshold,
           "threshold must lie in [0, 10], got " + std::to_string(threshold));
    }
    model.threshold = static_cast<micro_t>(std::llround(threshold * kMicroPerPoint));

    if (!doc.at("features").is_array()) {
      fail(ErrorCode::malformed_document, "'features' must be an array");
    }
    for (const json& entry : doc.at("features")) {
      Feature feature = entry.get<Feature>();
      if (feature.id.empty()) {
        fail(ErrorCode::malformed_document, "feature id must be non-empty");
      }
      if (feature.year < 1) {
        fail(ErrorCode::malformed_document,
             "feature '" + feature.id + "' has year < 1");
      }
      for (const std::string& prereq : feature.prerequisites) {
        if (prereq == feature.id) {
          fail(ErrorCode::malformed_document,
               "feature '" + feature.id + "' lists itself as a prerequisite");
        }
      }
      if (!model.features.emplace(feature.id, std::move(feature)).second) {
        fail(ErrorCode::duplicate_feature_id,
             "duplicate feature id '" + entry.at("id").get<std::string>() + "'");
      }
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::malformed_document, std::string("model document: ") + e.what());
  }

  for (const auto& [id, feature] : model.features) {
    for (const std::string& prereq : feature.prerequisites) {
      if (!model.contains(prereq)) {
        fail(ErrorCode::unknown_prerequisite,
             "feature '" + id + "' requires unknown feature '" + prereq + "'");
      }
    }
  }
  return model;
}

std::string serialize_model(const LanguageModel& model) {
  json features = json::array();
  for (const auto& [id, feature] : model.features) {
    features.push_back(feature);
  }
  json doc{{"language", model.language},
           {"threshold", static_cast<double>(model.threshold) / kMicroPerPoint},
           {"features", std::move(features)}};
  return doc.dump(2) + "\n";
}

namespace {

// Tarjan strongly connected components; any component of size > 1 (a
// self-loop cannot parse) is a prerequisite cycle.
struct SccFinder {
  const LanguageModel& model;
  std::map<std::string, int> index, lowlink;
  std::set<std::string> on_stack;
  std::vector<std::string> stack;
  std::vector<std::vector<std::string>> cycles;
  int counter = 0;

  explicit SccFinder(const LanguageModel& m) : model(m) {}

  void visit(const std::string& id) {
    index[id] = lowlink[id] = counter++;
    stack.push_back(id);
    on_stack.insert(id);
    for (const std::string& prereq : model.features.at(id).prerequisites) {
      if (!index.count(prereq)) {
        visit(prereq);
        lowlink[id] = std::min(lowlink[id], lowlink[prereq]);
      } else if (on_stack.count(prereq)) {
        lowlink[id] = std::min(lowlink[id], index[prereq]);
      }
    }
    if (lowlink[id] == index[id]) {
      std::vector<std::string> component;
      std::string member;
      do {
        member = stack.back();
        stack.pop_back();
        on_stack.erase(member);
        component.push_back(member);
      } while (member != id);
      if (component.size() > 1) {
        std::sort(component.begin(), component.end());
        cycles.push_back(std::move(component));
      }
    }
  }
};

std::string join_ids(const std::vector<std::string>& ids) {
  std::ostringstream out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out << ",";
    out << ids[i];
  }
  return out.str();
}

}  // namespace

std::vector<Violation> validate(const LanguageModel& model) {
  std::vector<Violation> violations;

  SccFinder scc(model);
  for (const auto& [id, feature] : model.features) {
    (void)feature;
    if (!scc.index.count(id)) scc.visit(id);
  }
  std::sort(scc.cycles.begin(), scc.cycles.end());
  for (auto& cycle : scc.cycles) {
    Violation v;
    v.kind = ViolationKind::cycle_detected;
    v.severity = Severity::error;
    v.message = "prerequisite cycle: " + join_ids(cycle);
    v.feature_ids = std::move(cycle);
    violations.push_back(std::move(v));
  }

  for (const auto& [id, feature] : model.features) {
    for (const std::string& prereq : feature.prerequisites) {
      const Feature& p = model.features.at(prereq);
      if (p.year > feature.year) {
        Violation v;
        v.kind = ViolationKind::year_inversion;
        v.severity = Severity::warning;
        v.feature_ids = {id, prereq};
        v.message = "feature '" + id + "' (year " + std::to_string(feature.year) +
                    ") depends on later feature '" + prereq + "' (year " +
                    std::to_string(p.year) + ")";
        violations.push_back(std::move(v));
      }
    }
  }

  std::stable_sort(violations.begin(), violations.end(),
                   [](const Violation& a, const Violation& b) {
                     if (a.severity != b.severity) {
                       return a.severity == Severity::error;
                     }
                     return a.feature_ids < b.feature_ids;
                   });
  return violations;
}

std::vector<std::string> topological_order(const LanguageModel& model) {
  std::map<std::string, int> pending;  // unresolved prerequisite count
  std::map<std::string, std::vector<std::string>> dependents;
  for (const auto& [id, feature] : model.features) {
    pending[id] = static_cast<int>(feature.prerequisites.size());
    for (const std::string& prereq : feature.prerequisites) {
      dependents[prereq].push_back(id);
    }
  }

  // Min-heap on id: the lexicographically smallest valid order.
  std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
  for (const auto& [id, count] : pending) {
    if (count == 0) ready.push(id);
  }

  std::vector<std::string> order;
  order.reserve(model.features.size());
  while (!ready.empty()) {
    std::string id = ready.top();
    ready.pop();
    order.push_back(id);
    for (const std::string& dependent : dependents[id]) {
      if (--pending[dependent] == 0) ready.push(dependent);
    }
  }
  if (order.size() != model.features.size()) {
    fail(ErrorCode::cyclic_model, "model contains a prerequisite cycle");
  }
  return order;
}

int depth(const LanguageModel& model, const std::string& feature_id) {
  model.at(feature_id);  // unknown id check
  std::map<std::string, int> depths;
  for (const std::string& id : topological_order(model)) {
    int d = 0;
    for (const std::string& prereq : model.features.at(id).prerequisites) {
      d = std::max(d, depths.at(prereq) + 1);
    }
    depths[id] = d;
  }
  return depths.at(feature_id);
}

}  // namespace lexseq
