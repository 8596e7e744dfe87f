#include "lexseq/sim.hpp"

#include <algorithm>
#include <ostream>

#include "lexseq/json_io.hpp"

namespace lexseq {

double ParamDist::sample(SplitMix64& rng) const {
  if (kind == Kind::constant) return value;
  return min + (max - min) * rng.uniform01();
}

GameResult simulate_session(SimStudent& student, const SessionPlan& plan) {
  GameResult result;
  result.session_index = plan.session_index;
  result.feature_id = plan.feature_id;
  result.game_type = plan.game_type;
  result.seed = plan.seed;

  double& skill = student.skill.at(plan.feature_id);
  result.item_outcomes.reserve(plan.items.size());
  for (std::size_t i = 0; i < plan.items.size(); ++i) {
    result.item_outcomes.push_back(student.rng.uniform01() < skill);
  }
  skill = std::min(1.0, skill + student.learning_rate);
  return result;
}

namespace {

std::string padded_index(std::int64_t index) {
  std::string digits = std::to_string(index);
  return std::string(digits.size() < 4 ? 4 - digits.size() : 0, '0') + digits;
}

// Nearest-rank percentile of an ascending vector.
std::int64_t percentile(const std::vector<std::int64_t>& sorted, int pct) {
  if (sorted.empty()) return 0;
  std::size_t rank = (sorted.size() * static_cast<std::size_t>(pct) + 99) / 100;
  if (rank == 0) rank = 1;
  return sorted[std::min(rank, sorted.size()) - 1];
}

void write_csv_rows(std::ostream& csv, const StudentProfile& profile,
                    std::int64_t session, const std::string& played_feature) {
  for (const auto& [id, state] : profile.states) {
    csv << profile.student_id << ',' << session << ',' << id << ','
        << state.mastery << ',' << to_string(state.status) << ','
        << (id == played_feature ? 1 : 0) << '\n';
  }
}

}  // namespace

CohortReport run_cohort(const LanguageModel& model, const Lexicon& lexicon,
                        const CohortSpec& spec, const MasteryParams& params,
                        std::uint64_t master_seed, const CohortSinks& sinks) {
  check_params(params);
  for (const Violation& violation : validate(model)) {
    if (violation.severity == Severity::error) {
      fail(ErrorCode::cyclic_model, violation.message);
    }
  }
  {
    std::vector<std::string> bad = lexicon_violations(lexicon, model);
    if (!bad.empty()) {
      fail(ErrorCode::unknown_feature, "lexicon: " + bad.front());
    }
  }

  CohortReport report;
  report.cohort_size = spec.size;
  report.n_sessions = spec.n_sessions;
  report.master_seed = master_seed;

  if (sinks.trajectory_csv) {
    *sinks.trajectory_csv
        << "student_id,session_index,feature_id,mastery,status,played\n";
  }

  for (std::int64_t index = 0; index < spec.size; ++index) {
    SimStudent student;
    student.profile_ref = spec.id_prefix + padded_index(index);
    student.seed = splitmix_jump(master_seed, static_cast<std::uint64_t>(index));
    student.rng = SplitMix64(student.seed);
    // Draw order is pinned: per-feature skill in id order, then the
    // learning rate.
    for (const auto& [id, feature] : model.features) {
      (void)feature;
      student.skill.emplace(id, spec.skill.sample(student.rng));
    }
    student.learning_rate = spec.learning_rate.sample(student.rng);

    StudentProfile profile =
        init_profile(model, student.profile_ref, spec.year, params);

    StudentSummary summary;
    summary.student_id = student.profile_ref;
    for (const auto& [id, state] : profile.states) {
      if (state.status != FeatureStatus::locked) summary.opened_at.emplace(id, 0);
      if (state.status == FeatureStatus::mastered) {
        summary.mastered_at.emplace(id, 0);
        summary.plays_to_mastery.emplace(id, 0);
      }
    }

    for (std::int64_t session = 1; session <= spec.n_sessions; ++session) {
      std::uint64_t plan_seed = student.rng.next();
      SessionPlan plan;
      try {
        plan = plan_session(profile, model, lexicon, params, plan_seed);
      } catch (const EngineError& e) {
        if (e.code() == ErrorCode::empty_pool || e.code() == ErrorCode::no_content) {
          // Terminal for this student: nothing advances staleness once
          // planning fails, so the pool can never refill.
          summary.starved = true;
          summary.starved_reason = error_code_name(e.code());
          report.starvation_total += 1;
          break;
        }
        throw;
      }

      GameResult result = simulate_session(student, plan);
      TransitionReport transition =
          apply_result(profile, model, plan, result, params);
      summary.sessions_run = session;
      if (!transition.demoted.empty()) {
        summary.demotion_events += 1;
        report.demotion_total += 1;
      }
      for (const std::string& id : transition.newly_opened) {
        summary.opened_at.emplace(id, session);
      }
      for (const auto& [id, state] : profile.states) {
        if (state.status == FeatureStatus::mastered &&
            !summary.mastered_at.count(id)) {
          summary.mastered_at.emplace(id, session);
          summary.plays_to_mastery.emplace(id, state.times_played);
        }
      }

      if (sinks.trajectory_csv) {
        write_csv_rows(*sinks.trajectory_csv, profile, session, plan.feature_id);
      }
      if (sinks.session_log) {
        json line = result;
        line["student_id"] = student.profile_ref;
        *sinks.session_log << line.dump() << '\n';
      }
    }

    for (const auto& [id, state] : profile.states) {
      summary.final_mastery.emplace(id, state.mastery);
    }
    report.students.push_back(std::move(summary));
  }

  for (const auto& [id, feature] : model.features) {
    (void)feature;
    std::vector<std::int64_t> sessions;
    for (const StudentSummary& summary : report.students) {
      auto it = summary.mastered_at.find(id);
      if (it != summary.mastered_at.end()) sessions.push_back(it->second);
    }
    std::sort(sessions.begin(), sessions.end());
    FeatureAggregate aggregate;
    aggregate.mastered_count = static_cast<std::int64_t>(sessions.size());
    aggregate.mastery_session_p50 = percentile(sessions, 50);
    aggregate.mastery_session_p90 = percentile(sessions, 90);
    aggregate.mastery_session_max = sessions.empty() ? 0 : sessions.back();
    report.feature_aggregates.emplace(id, aggregate);
  }
  return report;
}

}  // namespace lexseq
