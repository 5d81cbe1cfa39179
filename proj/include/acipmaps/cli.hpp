#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

#include "acipmaps/io.hpp"

namespace acipmaps::cli {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string mode = "acip";  // acip | lebesgue
  std::string modulus = "holder:alpha=0.5,C=1";
  std::uint64_t seed = 1;
  int grid = 1 << 12;
  int k_max = 0;  // 0 picks the command default
  double tol = 5e-6;
  std::string out = "runs";

  /// Throws UsageError.
  void validate() const;
  int effective_k_max() const;
  /// Every field except the output root, in a fixed order.
  std::string canonical() const;
  /// command + "-" + 16 hex digits of FNV-1a over canonical().
  std::string run_name() const;
};

/// Flat key=value file with the flag names as keys; '#' starts a comment.
void apply_config_file(RunConfig& cfg, const std::string& path);
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

std::uint64_t fnv1a(const std::string& text);

struct CommandResult {
  int exit_code = 0;
  std::string directory;
  json report;
  std::string failure;  // first failing check, if any
};

CommandResult cmd_construct(const RunConfig& cfg);
CommandResult cmd_verify(const RunConfig& cfg);
CommandResult cmd_distortion(const RunConfig& cfg);
CommandResult cmd_dini(const RunConfig& cfg);
CommandResult run(const RunConfig& cfg);

/// Full front-end: parses argv, runs, and maps errors to exit codes
/// 0 (success), 1 (certification failure) and 2 (usage error).
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace acipmaps::cli
