// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#include "testpair/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace testpair {

namespace {

void append_env(std::vector<std::string>& envs, const char* name) {
  const char* value = std::getenv(name);
  if (value) envs.push_back(std::string{name} + "=" + value);
}

}  // namespace

CommandResult run_command(const std::vector<std::string>& argv,
                          const std::filesystem::path& cwd,
                          const std::map<std::string, std::string>& env,
                          int timeout_secs) {
  if (argv.empty()) throw std::invalid_argument("empty command");

  int out_pipe[2];
  int err_pipe[2];
  if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0) {
    throw std::runtime_error("pipe() failed");
  }

  std::vector<std::string> envs;
  append_env(envs, "PATH");
  append_env(envs, "HOME");
  append_env(envs, "TMPDIR");
  append_env(envs, "LANG");
  envs.push_back("PYTHONDONTWRITEBYTECODE=1");
  envs.push_back("PYTHONHASHSEED=0");
  for (const auto& [k, v] : env) envs.push_back(k + "=" + v);

  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = fork();
  if (pid < 0) throw std::runtime_error("fork() failed");
  if (pid == 0) {
    setpgid(0, 0);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    close(out_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[0]);
    close(err_pipe[1]);
    if (chdir(cwd.c_str()) != 0) _exit(127);

    std::vector<char*> cargv;
    for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    std::vector<char*> cenv;
    for (const auto& e : envs) cenv.push_back(const_cast<char*>(e.c_str()));
    cenv.push_back(nullptr);
    execvpe(cargv[0], cargv.data(), cenv.data());
    _exit(127);
  }

  close(out_pipe[1]);
  close(err_pipe[1]);
  fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);
  fcntl(err_pipe[0], F_SETFL, O_NONBLOCK);

  CommandResult result;
  const auto deadline =
      start + std::chrono::seconds(timeout_secs > 0 ? timeout_secs : 3600);
  bool out_open = true;
  bool err_open = true;
  char buf[4096];

  auto drain = [&](int fd, std::string& into, bool& open) {
    while (open) {
      const ssize_t n = read(fd, buf, sizeof(buf));
      if (n > 0) {
        into.append(buf, static_cast<std::size_t>(n));
      } else if (n == 0) {
        open = false;
      } else {
        break;  // EAGAIN
      }
    }
  };

  int status = 0;
  bool exited = false;
  while (true) {
    struct pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
    poll(fds, 2, 50);
    drain(out_pipe[0], result.stdout_text, out_open);
    drain(err_pipe[0], result.stderr_text, err_open);

    if (!exited) {
      const pid_t w = waitpid(pid, &status, WNOHANG);
      if (w == pid) exited = true;
    }
    if (exited && !out_open && !err_open) break;
    if (exited && std::chrono::steady_clock::now() > deadline) break;

    if (!exited && std::chrono::steady_clock::now() > deadline) {
      kill(-pid, SIGKILL);
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      exited = true;
      result.timed_out = true;
      drain(out_pipe[0], result.stdout_text, out_open);
      drain(err_pipe[0], result.stderr_text, err_open);
      break;
    }
  }
  close(out_pipe[0]);
  close(err_pipe[0]);

  result.duration_secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (result.timed_out) {
    result.exit_code = kTimeoutExitCode;
  } else if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.exit_code = 128 + WTERMSIG(status);
  }
  return result;
}

}  // namespace testpair
