#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "lexseq/rng.hpp"
#include "lexseq/selector.hpp"

namespace lexseq {

// A distribution for cohort parameters: a constant, or uniform over
// [min, max] sampled from the student's own generator.
struct ParamDist {
  enum class Kind { constant, uniform };
  Kind kind = Kind::constant;
  double value = 1.0;  // constant
  double min = 0.0;    // uniform
  double max = 1.0;

  double sample(SplitMix64& rng) const;
  bool operator==(const ParamDist&) const = default;
};

struct CohortSpec {
  std::int64_t size = 1;
  int year = 1;
  std::int64_t n_sessions = 1;
  ParamDist skill;                  // per-feature correctness probability
  ParamDist learning_rate{ParamDist::Kind::constant, 0.0, 0.0, 0.0};
  std::string id_prefix = "s";

  bool operator==(const CohortSpec&) const = default;
};

// A synthetic student: answers each content item independently with
// probability skill[feature]; skill rises by learning_rate per session
// played on that feature, capped at 1.
struct SimStudent {
  std::string profile_ref;
  std::map<std::string, double> skill;
  double learning_rate = 0.0;
  std::uint64_t seed = 0;
  SplitMix64 rng{0};
};

// Draws one outcome per plan item from the student's generator, then applies
// the learning gain to the played feature.
GameResult simulate_session(SimStudent& student, const SessionPlan& plan);

struct StudentSummary {
  std::string student_id;
  std::int64_t sessions_run = 0;
  bool starved = false;          // planning ended in empty_pool / no_content
  std::string starved_reason;
  std::int64_t demotion_events = 0;
  std::map<std::string, std::int64_t> opened_at;    // first session open; 0 = at init
  std::map<std::string, std::int64_t> mastered_at;  // first session fully mastered
  std::map<std::string, std::int64_t> plays_to_mastery;
  std::map<std::string, micro_t> final_mastery;
};

struct FeatureAggregate {
  std::int64_t mastered_count = 0;
  std::int64_t mastery_session_p50 = 0;  // nearest-rank percentiles
  std::int64_t mastery_session_p90 = 0;
  std::int64_t mastery_session_max = 0;
};

struct CohortReport {
  std::int64_t cohort_size = 0;
  std::int64_t n_sessions = 0;
  std::uint64_t master_seed = 0;
  std::int64_t starvation_total = 0;
  std::int64_t demotion_total = 0;
  std::vector<StudentSummary> students;  // ascending student id
  std::map<std::string, FeatureAggregate> feature_aggregates;
};

// Optional row-level outputs, written as the cohort runs.
struct CohortSinks {
  std::ostream* trajectory_csv = nullptr;  // one row per student-session-feature
  std::ostream* session_log = nullptr;     // JSON-lines of results + student_id
};

// Runs plan -> simulate -> apply for every student for n_sessions (or until
// the pool is exhausted). Student i plays with sub-seed
// splitmix_jump(master_seed, i); the whole run is a pure function of its
// arguments. Model/lexicon defects are rejected before any student runs.
CohortReport run_cohort(const LanguageModel& model, const Lexicon& lexicon,
                        const CohortSpec& spec, const MasteryParams& params,
                        std::uint64_t master_seed,
                        const CohortSinks& sinks = {});

}  // namespace lexseq
