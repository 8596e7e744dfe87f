#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "lexseq/selector.hpp"
#include "lexseq/sim.hpp"
#include "lexseq/storage.hpp"

namespace lexseq {

struct EngineConfig {
  std::filesystem::path data_dir = "data";
  std::filesystem::path model_path;
  std::filesystem::path lexicon_path;
  std::int64_t items_per_session = 7;
  std::string listen = "127.0.0.1:8080";
  // Raw "params" block from the config file; overlaid onto the defaults
  // after the model's threshold has been applied, so explicit config wins.
  std::string params_overrides_json;
  // CLI commands fail fast on a held lock; the service waits instead.
  bool wait_for_locks = true;
};

// Reads a JSON config file ({"data_dir", "model", "lexicon",
// "items_per_session", "listen", "params"}); relative paths resolve against
// the config file's directory.
EngineConfig load_engine_config(const std::filesystem::path& path);

// The shared core behind both the CLI and the HTTP service: owns the loaded
// model, lexicon, effective params and the profile store, and serializes all
// mutations per student (an in-process mutex plus an advisory file lock, so
// concurrent processes on the same data directory are also safe).
class Engine {
 public:
  explicit Engine(EngineConfig config);

  const LanguageModel& model() const { return model_; }
  const Lexicon& lexicon() const { return lexicon_; }
  const MasteryParams& params() const { return params_; }
  const EngineConfig& config() const { return config_; }

  StudentProfile init_student(const std::string& student_id, int year);
  // Unseeded plans use default_plan_seed(student_id, session_counter + 1).
  SessionPlan plan(const std::string& student_id,
                   std::optional<std::uint64_t> seed) const;
  // Recomputes the plan for result.seed, checks the result against it, then
  // applies it. The log line is durable before the snapshot is replaced.
  TransitionReport submit(const std::string& student_id,
                          const GameResult& result);
  StudentProfile inspect(const std::string& student_id) const;

  // Runs a cohort and writes report.json, trajectories.csv and
  // sessions.jsonl under out_dir.
  CohortReport simulate(const CohortSpec& spec, std::uint64_t master_seed,
                        const std::filesystem::path& out_dir) const;

 private:
  struct Loaded {
    StudentProfile profile;
    bool recovered = false;  // log was ahead of the snapshot; tail replayed
  };

  Loaded load_student(const std::string& student_id) const;
  std::mutex& student_mutex(const std::string& student_id) const;

  EngineConfig config_;
  LanguageModel model_;
  Lexicon lexicon_;
  MasteryParams params_;
  ProfileStore store_;

  mutable std::mutex registry_mutex_;
  mutable std::map<std::string, std::unique_ptr<std::mutex>> student_mutexes_;
};

}  // namespace lexseq
