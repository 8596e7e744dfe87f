#include "lexseq/engine.hpp"

#include <fstream>
#include <sstream>

#include "lexseq/json_io.hpp"
#include "lexseq/rng.hpp"

namespace lexseq {

namespace {

std::string read_file_or_fail(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorCode::io_error, "cannot read " + path.string());
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

EngineConfig load_engine_config(const std::filesystem::path& path) {
  json doc = parse_json_text(read_file_or_fail(path), ErrorCode::malformed_document);
  if (!doc.is_object()) {
    fail(ErrorCode::malformed_document, "config must be a JSON object");
  }

  EngineConfig config;
  std::filesystem::path base = path.parent_path();
  auto resolve = [&base](const std::string& value) {
    std::filesystem::path p(value);
    return p.is_absolute() ? p : base / p;
  };
  try {
    if (doc.contains("data_dir")) {
      config.data_dir = resolve(doc.at("data_dir").get<std::string>());
    }
    if (doc.contains("model")) {
      config.model_path = resolve(doc.at("model").get<std::string>());
    }
    if (doc.contains("lexicon")) {
      config.lexicon_path = resolve(doc.at("lexicon").get<std::string>());
    }
    config.items_per_session = doc.value("items_per_session", config.items_per_session);
    config.listen = doc.value("listen", config.listen);
    if (doc.contains("params")) {
      config.params_overrides_json = doc.at("params").dump();
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::malformed_document, std::string("config: ") + e.what());
  }
  return config;
}

Engine::Engine(EngineConfig config)
    : config_(std::move(config)), store_(config_.data_dir) {
  if (config_.model_path.empty()) {
    fail(ErrorCode::invalid_argument, "no model file configured");
  }
  if (config_.lexicon_path.empty()) {
    fail(ErrorCode::invalid_argument, "no lexicon file configured");
  }
  model_ = parse_model(read_file_or_fail(config_.model_path));
  for (const Violation& violation : validate(model_)) {
    if (violation.severity == Severity::error) {
      fail(ErrorCode::cyclic_model, config_.model_path.string() + ": " +
                                        violation.message);
    }
  }
  lexicon_ = parse_lexicon(read_file_or_fail(config_.lexicon_path), model_.language);
  {
    std::vector<std::string> bad = lexicon_violations(lexicon_, model_);
    if (!bad.empty()) {
      fail(ErrorCode::unknown_feature,
           config_.lexicon_path.string() + ": " + bad.front());
    }
  }

  // Precedence: defaults, then the model's own threshold, then explicit
  // config overrides.
  params_ = MasteryParams{};
  params_.unlock_threshold = model_.threshold;
  params_.items_per_session = config_.items_per_session;
  if (!config_.params_overrides_json.empty()) {
    apply_params_json(params_, parse_json_text(config_.params_overrides_json,
                                               ErrorCode::malformed_document));
  }
  check_params(params_);
}

std::mutex& Engine::student_mutex(const std::string& student_id) const {
  std::lock_guard<std::mutex> guard(registry_mutex_);
  auto it = student_mutexes_.find(student_id);
  if (it == student_mutexes_.end()) {
    it = student_mutexes_.emplace(student_id, std::make_unique<std::mutex>()).first;
  }
  return *it->second;
}

Engine::Loaded Engine::load_student(const std::string& student_id) const {
  StudentProfile profile = store_.load_profile(model_.language, student_id);
  if (profile.states.size() != model_.features.size()) {
    fail(ErrorCode::profile_model_mismatch,
         "profile for '" + student_id + "' does not match the loaded model");
  }
  for (const auto& [id, state] : profile.states) {
    (void)state;
    if (!model_.contains(id)) {
      fail(ErrorCode::profile_model_mismatch,
           "profile for '" + student_id + "' has state for unknown feature '" +
               id + "'");
    }
  }

  std::vector<GameResult> log = store_.load_results(model_.language, student_id);
  if (static_cast<std::int64_t>(log.size()) < profile.session_counter) {
    fail(ErrorCode::corrupt_record,
         "snapshot for '" + student_id + "' is ahead of its session log");
  }
  Loaded loaded{std::move(profile), false};
  if (static_cast<std::int64_t>(log.size()) > loaded.profile.session_counter) {
    // The log is durable before the snapshot is replaced, so a crash can
    // leave it ahead. The log wins: replay the tail.
    for (std::size_t i = static_cast<std::size_t>(loaded.profile.session_counter);
         i < log.size(); ++i) {
      apply_result_unchecked(loaded.profile, model_, log[i], params_);
    }
    loaded.recovered = true;
  }
  return loaded;
}

StudentProfile Engine::init_student(const std::string& student_id, int year) {
  check_student_id(student_id);
  std::lock_guard<std::mutex> guard(student_mutex(student_id));
  StudentLock file_lock(store_.student_dir(model_.language, student_id),
                        config_.wait_for_locks);
  if (store_.exists(model_.language, student_id)) {
    fail(ErrorCode::already_exists,
         "student '" + student_id + "' is already initialised");
  }
  StudentProfile profile = init_profile(model_, student_id, year, params_);
  store_.save_profile(profile);
  return profile;
}

SessionPlan Engine::plan(const std::string& student_id,
                         std::optional<std::uint64_t> seed) const {
  check_student_id(student_id);
  std::lock_guard<std::mutex> guard(student_mutex(student_id));
  StudentLock file_lock(store_.student_dir(model_.language, student_id),
                        config_.wait_for_locks);
  Loaded loaded = load_student(student_id);
  std::uint64_t plan_seed =
      seed ? *seed
           : default_plan_seed(student_id, loaded.profile.session_counter + 1);
  return plan_session(loaded.profile, model_, lexicon_, params_, plan_seed);
}

TransitionReport Engine::submit(const std::string& student_id,
                                const GameResult& result) {
  check_student_id(student_id);
  std::lock_guard<std::mutex> guard(student_mutex(student_id));
  StudentLock file_lock(store_.student_dir(model_.language, student_id),
                        config_.wait_for_locks);
  Loaded loaded = load_student(student_id);

  // Planning is a pure function of (profile, seed), so the plan the client
  // played can be recomputed from the seed it echoes back. A result for any
  // other feature or session index cannot have come from a served plan.
  SessionPlan plan =
      plan_session(loaded.profile, model_, lexicon_, params_, result.seed);
  TransitionReport report =
      apply_result(loaded.profile, model_, plan, result, params_);

  // Durability order: log line first, snapshot second, response last.
  store_.append_result(model_.language, student_id, result);
  store_.save_profile(loaded.profile);
  return report;
}

StudentProfile Engine::inspect(const std::string& student_id) const {
  check_student_id(student_id);
  std::lock_guard<std::mutex> guard(student_mutex(student_id));
  StudentLock file_lock(store_.student_dir(model_.language, student_id),
                        config_.wait_for_locks);
  return load_student(student_id).profile;
}

CohortReport Engine::simulate(const CohortSpec& spec, std::uint64_t master_seed,
                              const std::filesystem::path& out_dir) const {
  std::filesystem::create_directories(out_dir);
  std::ofstream csv(out_dir / "trajectories.csv", std::ios::binary | std::ios::trunc);
  std::ofstream log(out_dir / "sessions.jsonl", std::ios::binary | std::ios::trunc);
  if (!csv || !log) {
    fail(ErrorCode::io_error, "cannot write cohort outputs under " + out_dir.string());
  }
  CohortSinks sinks;
  sinks.trajectory_csv = &csv;
  sinks.session_log = &log;
  CohortReport report =
      run_cohort(model_, lexicon_, spec, params_, master_seed, sinks);
  csv.flush();
  log.flush();

  std::ofstream summary(out_dir / "report.json", std::ios::binary | std::ios::trunc);
  if (!summary) {
    fail(ErrorCode::io_error, "cannot write " + (out_dir / "report.json").string());
  }
  summary << json(report).dump(2) << "\n";
  return report;
}

}  // namespace lexseq
