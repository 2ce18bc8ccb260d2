#ifndef METAESTIM_SUBPROCESS_HPP
#define METAESTIM_SUBPROCESS_HPP

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace metaestim {

struct ProcessRequest {
  /// Run through /bin/sh -c.
  std::string command;
  std::filesystem::path working_dir;
  /// Added to (or overriding) the inherited environment.
  std::vector<std::pair<std::string, std::string>> extra_env;
  std::string stdin_text;
  double timeout_seconds = 60.0;
};

struct ProcessResult {
  int exit_code = -1;
  /// Signal that terminated the shell, 0 if it exited normally.
  int term_signal = 0;
  bool timed_out = false;
  std::string stdout_text;
  std::string stderr_text;

  bool ok() const noexcept { return !timed_out && term_signal == 0 && exit_code == 0; }
};

/// Runs the command in its own process group. On timeout the whole group is
/// killed and the child reaped before returning. Throws std::system_error
/// when the process cannot be started.
ProcessResult run_process(const ProcessRequest& request);

}  // namespace metaestim

#endif  // METAESTIM_SUBPROCESS_HPP
