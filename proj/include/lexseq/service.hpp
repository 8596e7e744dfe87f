#pragma once

#include <memory>
#include <string>

#include "lexseq/engine.hpp"

namespace lexseq {

// JSON-over-HTTP front end for an Engine:
//   POST /students                      {"id", "year"}        -> 201 profile
//   GET  /students/{id}/plan?seed=N                           -> 200 plan
//   POST /students/{id}/results         GameResult body       -> 200 report
//   GET  /students/{id}/profile                               -> 200 profile
// Errors: 404 unknown student, 409 session-index conflict or duplicate
// student, 422 validation/planning failure.
class Service {
 public:
  explicit Service(Engine& engine);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds to an OS-assigned port and serves on a background thread.
  // Returns the bound port.
  int start_background(const std::string& host);
  // Binds to host:port and blocks until stop() (or a signal handler) is
  // called from another thread.
  void run_blocking(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace lexseq
