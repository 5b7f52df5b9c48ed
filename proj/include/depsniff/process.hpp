#pragma once

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <string>
#include <vector>

#include "depsniff/errors.hpp"

namespace depsniff {

struct ProcessResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs a command with stdin closed, capturing stdout and stderr separately.
/// Output is treated as raw bytes; NUL-separated formats pass through intact.
inline ProcessResult run_process(const std::vector<std::string>& argv,
                                 const std::string& working_dir = "") {
  if (argv.empty()) throw IoError("empty command line");

  int out_pipe[2];
  int err_pipe[2];
  if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0)
    throw IoError(std::string("pipe: ") + std::strerror(errno));

  pid_t pid = fork();
  if (pid < 0) throw IoError(std::string("fork: ") + std::strerror(errno));

  if (pid == 0) {
    int devnull = open("/dev/null", O_RDONLY);
    if (devnull >= 0) dup2(devnull, STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    close(out_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[0]);
    close(err_pipe[1]);
    if (!working_dir.empty() && chdir(working_dir.c_str()) != 0) _exit(127);
    std::vector<char*> args;
    args.reserve(argv.size() + 1);
    for (const std::string& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    execvp(args[0], args.data());
    _exit(127);
  }

  close(out_pipe[1]);
  close(err_pipe[1]);

  ProcessResult result;
  struct Stream {
    int fd;
    std::string* sink;
    bool open;
  };
  Stream streams[2] = {{out_pipe[0], &result.out, true},
                       {err_pipe[0], &result.err, true}};
  char buffer[4096];
  while (streams[0].open || streams[1].open) {
    pollfd fds[2];
    nfds_t n = 0;
    for (Stream& s : streams)
      if (s.open) fds[n++] = {s.fd, POLLIN, 0};
    if (poll(fds, n, -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    nfds_t i = 0;
    for (Stream& s : streams) {
      if (!s.open) continue;
      pollfd& p = fds[i++];
      if (!(p.revents & (POLLIN | POLLHUP))) continue;
      ssize_t got = read(s.fd, buffer, sizeof(buffer));
      if (got > 0) {
        s.sink->append(buffer, static_cast<std::size_t>(got));
      } else if (got == 0 || (got < 0 && errno != EINTR)) {
        close(s.fd);
        s.open = false;
      }
    }
  }

  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (WIFEXITED(status))
    result.exit_code = WEXITSTATUS(status);
  else if (WIFSIGNALED(status))
    result.exit_code = 128 + WTERMSIG(status);
  return result;
}

}  // namespace depsniff
