#include "lexseq/storage.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cctype>
#include <fstream>
#include <sstream>

#include "lexseq/json_io.hpp"

namespace lexseq {

void check_student_id(const std::string& student_id) {
  if (student_id.empty() || student_id.size() > 64) {
    fail(ErrorCode::invalid_argument, "student id must be 1..64 characters");
  }
  if (!std::isalnum(static_cast<unsigned char>(student_id.front()))) {
    fail(ErrorCode::invalid_argument, "student id must start with a letter or digit");
  }
  for (char c : student_id) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' &&
        c != '.') {
      fail(ErrorCode::invalid_argument,
           "student id '" + student_id + "' contains unsupported characters");
    }
  }
  if (student_id.find("..") != std::string::npos) {
    fail(ErrorCode::invalid_argument, "student id must not contain '..'");
  }
}

std::filesystem::path ProfileStore::student_dir(const std::string& language,
                                                const std::string& student_id) const {
  check_student_id(student_id);
  if (language.empty()) {
    fail(ErrorCode::invalid_argument, "language code must be non-empty");
  }
  return root_ / language / student_id;
}

bool ProfileStore::exists(const std::string& language,
                          const std::string& student_id) const {
  return std::filesystem::exists(student_dir(language, student_id) / "profile.json");
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorCode::io_error, "cannot read " + path.string());
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& body) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      fail(ErrorCode::io_error, "cannot write " + tmp.string());
    }
    out << body;
    out.flush();
    if (!out) {
      fail(ErrorCode::io_error, "short write to " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

void ProfileStore::save_profile(const StudentProfile& profile) const {
  std::filesystem::path dir = student_dir(profile.model_language, profile.student_id);
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "profile.json", json(profile).dump(2) + "\n");
}

StudentProfile ProfileStore::load_profile(const std::string& language,
                                          const std::string& student_id) const {
  std::filesystem::path path = student_dir(language, student_id) / "profile.json";
  if (!std::filesystem::exists(path)) {
    fail(ErrorCode::not_found, "no profile for student '" + student_id + "'");
  }
  try {
    return parse_json_text(read_file(path), ErrorCode::corrupt_record)
        .get<StudentProfile>();
  } catch (const json::exception& e) {
    fail(ErrorCode::corrupt_record,
         path.string() + ": " + e.what());
  }
}

void ProfileStore::append_result(const std::string& language,
                                 const std::string& student_id,
                                 const GameResult& result) const {
  std::filesystem::path dir = student_dir(language, student_id);
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / "sessions.jsonl", std::ios::binary | std::ios::app);
  if (!out) {
    fail(ErrorCode::io_error, "cannot append to " + (dir / "sessions.jsonl").string());
  }
  out << json(result).dump() << "\n";
  out.flush();
  if (!out) {
    fail(ErrorCode::io_error, "short append to " + (dir / "sessions.jsonl").string());
  }
}

std::vector<GameResult> ProfileStore::load_results(const std::string& language,
                                                   const std::string& student_id) const {
  std::filesystem::path path = student_dir(language, student_id) / "sessions.jsonl";
  std::vector<GameResult> results;
  if (!std::filesystem::exists(path)) {
    return results;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorCode::io_error, "cannot read " + path.string());
  }
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      results.push_back(parse_json_text(line, ErrorCode::corrupt_record)
                            .get<GameResult>());
    } catch (const EngineError&) {
      fail(ErrorCode::corrupt_record,
           path.string() + " line " + std::to_string(line_number) +
               ": unreadable session record");
    } catch (const json::exception& e) {
      fail(ErrorCode::corrupt_record,
           path.string() + " line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return results;
}

StudentLock::StudentLock(const std::filesystem::path& student_dir, bool wait) {
  std::filesystem::create_directories(student_dir);
  std::filesystem::path lock_path = student_dir / ".lock";
  fd_ = ::open(lock_path.c_str(), O_CREAT | O_RDWR, 0644);
  if (fd_ < 0) {
    fail(ErrorCode::io_error, "cannot open lock file " + lock_path.string());
  }
  int flags = LOCK_EX | (wait ? 0 : LOCK_NB);
  if (::flock(fd_, flags) != 0) {
    ::close(fd_);
    fd_ = -1;
    fail(ErrorCode::lock_contention,
         "student directory is locked by another process: " + student_dir.string());
  }
}

StudentLock::~StudentLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

}  // namespace lexseq
