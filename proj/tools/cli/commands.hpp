#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "config.hpp"

namespace beltrami::cli {

enum ExitCode : int {
  kOk = 0,
  kParseError = 2,
  kInvalidInput = 3,
  kNonConvergence = 4,
  kVerificationFailed = 5,
};

// Thrown by verify-model when a check exceeds its tolerance.
class VerificationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// What the command line supplied: an optional config file plus the flags
// that were actually given (as a JSON object of overrides).
struct Invocation {
  std::optional<std::string> config_path;
  Json overrides = Json::object();
};

int cmd_criterion(const Invocation& inv, std::ostream& out);
int cmd_mesh_info(const Invocation& inv, std::ostream& out);
int cmd_solve(const Invocation& inv, std::ostream& out);
int cmd_diagnose(const Invocation& inv, std::ostream& out);
int cmd_sweep(const Invocation& inv, std::ostream& out);
int cmd_verify_model(const Invocation& inv, std::ostream& out);

// Default config of each command (used for --help output and the docs).
Json default_config(const std::string& command);

}  // namespace beltrami::cli
