#pragma once

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "ordvote/error.hpp"
#include "ordvote/formula.hpp"
#include "ordvote/solver.hpp"

namespace ordvote::sat {

namespace detail {

class TempCnfFile {
 public:
  explicit TempCnfFile(const std::string& contents) {
    char tmpl[] = "/tmp/ordvote-XXXXXX.cnf";
    int fd = ::mkstemps(tmpl, 4);
    if (fd < 0) fail(Errc::solver_spawn_failure, "mkstemps: " + std::string(std::strerror(errno)));
    path_ = tmpl;
    size_t off = 0;
    while (off < contents.size()) {
      ssize_t n = ::write(fd, contents.data() + off, contents.size() - off);
      if (n < 0) {
        ::close(fd);
        fail(Errc::solver_spawn_failure, "write: " + std::string(std::strerror(errno)));
      }
      off += (size_t)n;
    }
    ::close(fd);
  }

  ~TempCnfFile() { ::unlink(path_.c_str()); }

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace detail

// Runs `<command> <cnf-path>` through /bin/sh, captures stdout, and parses
// the usual "s ..."/"v ..." lines. Exit code 10 (SAT) and 20 (UNSAT) are
// honored when present. Budget overruns kill the whole process group and
// come back as BUDGET with no partial model.
inline SolveResult solve_external(const CnfInstance& cnf, const std::string& command,
                                  SolveBudget budget = {}) {
  detail::TempCnfFile file(emit_dimacs(cnf));
  std::string shell_cmd = command + " " + file.path();

  int out_pipe[2];
  if (::pipe(out_pipe) != 0)
    fail(Errc::solver_spawn_failure, "pipe: " + std::string(std::strerror(errno)));

  pid_t pid = ::fork();
  if (pid < 0) {
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    fail(Errc::solver_spawn_failure, "fork: " + std::string(std::strerror(errno)));
  }
  if (pid == 0) {
    ::setpgid(0, 0);  // own process group so a timeout can kill helpers too
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::execl("/bin/sh", "sh", "-c", shell_cmd.c_str(), (char*)nullptr);
    std::_Exit(127);
  }
  ::close(out_pipe[1]);

  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration<double>(budget.max_seconds >= 0 ? budget.max_seconds : 1e18);
  std::string output;
  bool timed_out = false;
  char buf[1 << 16];
  for (;;) {
    int wait_ms = 200;
    if (budget.max_seconds >= 0) {
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                      deadline - std::chrono::steady_clock::now())
                      .count();
      if (left <= 0) {
        timed_out = true;
        break;
      }
      wait_ms = (int)std::min<long long>(left, 200);
    }
    struct pollfd pfd{out_pipe[0], POLLIN, 0};
    int pr = ::poll(&pfd, 1, wait_ms);
    if (pr > 0) {
      ssize_t n = ::read(out_pipe[0], buf, sizeof(buf));
      if (n > 0)
        output.append(buf, (size_t)n);
      else
        break;  // EOF
    }
  }
  if (timed_out) ::kill(-pid, SIGKILL);
  // Drain whatever is left after EOF or kill.
  for (;;) {
    ssize_t n = ::read(out_pipe[0], buf, sizeof(buf));
    if (n <= 0) break;
    output.append(buf, (size_t)n);
  }
  ::close(out_pipe[0]);

  int wstatus = 0;
  ::waitpid(pid, &wstatus, 0);

  if (timed_out) return SolveResult{Status::budget, {}, 0, 0, 0};

  int exit_code = WIFEXITED(wstatus) ? WEXITSTATUS(wstatus) : -1;
  if (exit_code == 126 || exit_code == 127)
    fail(Errc::solver_spawn_failure, "command failed to start: " + command);

  ParsedOutput parsed = parse_solver_output(output, cnf.num_vars);
  SolveResult res;
  if (parsed.status == Status::budget) {
    // No recognizable status line; fall back to the conventional exit codes.
    if (exit_code == 20) {
      res.status = Status::unsat;
      return res;
    }
    if (exit_code == 10)
      fail(Errc::malformed_solver_output, "exit code says SAT but no model was printed");
    res.status = Status::budget;
    return res;
  }
  res.status = parsed.status;
  if (parsed.status == Status::sat) {
    if (!model_satisfies(cnf, parsed.model))
      fail(Errc::malformed_solver_output, "reported model does not satisfy the formula");
    res.model = std::move(parsed.model);
  }
  return res;
}

}  // namespace ordvote::sat
