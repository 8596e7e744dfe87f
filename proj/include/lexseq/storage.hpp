#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lexseq/profile.hpp"

namespace lexseq {

// Throws invalid_argument unless the id is path-safe:
// [A-Za-z0-9][A-Za-z0-9_.-]{0,63} with no ".." component.
void check_student_id(const std::string& student_id);

// On-disk layout, one directory per student:
//   <root>/<language>/<student_id>/profile.json    snapshot, written atomically
//   <root>/<language>/<student_id>/sessions.jsonl  append-only result log
//   <root>/<language>/<student_id>/.lock           advisory flock target
class ProfileStore {
 public:
  explicit ProfileStore(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path student_dir(const std::string& language,
                                    const std::string& student_id) const;
  bool exists(const std::string& language, const std::string& student_id) const;

  // Write-then-rename; the snapshot on disk is never half-written.
  void save_profile(const StudentProfile& profile) const;
  StudentProfile load_profile(const std::string& language,
                              const std::string& student_id) const;

  void append_result(const std::string& language, const std::string& student_id,
                     const GameResult& result) const;
  // Throws corrupt_record naming the 1-based line of the first bad record.
  std::vector<GameResult> load_results(const std::string& language,
                                       const std::string& student_id) const;

 private:
  std::filesystem::path root_;
};

// Advisory per-student exclusive lock (flock on <dir>/.lock). Non-waiting
// acquisition throws lock_contention when the lock is held elsewhere.
class StudentLock {
 public:
  StudentLock(const std::filesystem::path& student_dir, bool wait);
  ~StudentLock();

  StudentLock(const StudentLock&) = delete;
  StudentLock& operator=(const StudentLock&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace lexseq
