#include "schemev/subprocess.hpp"

#include <csignal>
#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "schemev/errors.hpp"

extern char** environ;

namespace schemev {

namespace {

struct Pipe {
  int fds[2] = {-1, -1};

  Pipe() {
    if (pipe(fds) != 0)
      throw ToolInvocationError(std::string("pipe: ") + std::strerror(errno));
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  void close_read() {
    if (fds[0] >= 0) ::close(fds[0]);
    fds[0] = -1;
  }
  void close_write() {
    if (fds[1] >= 0) ::close(fds[1]);
    fds[1] = -1;
  }
};

void set_nonblocking(int fd) {
  int flags = fcntl(fd, F_GETFL, 0);
  fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::optional<std::string>& stdin_data,
                          const std::map<std::string, std::string>& extra_env) {
  if (argv.empty()) throw ToolInvocationError("empty argv");

  // a child closing stdin early must not kill us on write
  static const bool sigpipe_ignored = [] {
    signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)sigpipe_ignored;

  Pipe in, out, err;

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in.fds[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out.fds[1], STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, err.fds[1], STDERR_FILENO);
  posix_spawn_file_actions_addclose(&actions, in.fds[1]);
  posix_spawn_file_actions_addclose(&actions, out.fds[0]);
  posix_spawn_file_actions_addclose(&actions, err.fds[0]);

  std::vector<char*> c_argv;
  for (const auto& a : argv) c_argv.push_back(const_cast<char*>(a.c_str()));
  c_argv.push_back(nullptr);

  std::vector<std::string> env_storage;
  env_storage.reserve(extra_env.size());
  std::vector<char*> c_env;
  for (char** e = environ; *e; ++e) {
    std::string_view entry(*e);
    auto eq = entry.find('=');
    std::string key(entry.substr(0, eq));
    if (!extra_env.count(key)) c_env.push_back(*e);
  }
  for (const auto& [k, v] : extra_env) {
    env_storage.push_back(k + "=" + v);
    c_env.push_back(env_storage.back().data());
  }
  c_env.push_back(nullptr);

  pid_t pid = -1;
  int rc = posix_spawnp(&pid, argv[0].c_str(), &actions, nullptr,
                        c_argv.data(), c_env.data());
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0)
    throw ToolInvocationError("cannot run '" + argv[0] + "': " +
                              std::strerror(rc));

  in.close_read();
  out.close_write();
  err.close_write();

  std::string_view pending = stdin_data ? std::string_view(*stdin_data)
                                        : std::string_view();
  if (pending.empty()) in.close_write();
  else set_nonblocking(in.fds[1]);
  set_nonblocking(out.fds[0]);
  set_nonblocking(err.fds[0]);

  ProcessResult result;
  char buf[65536];
  while (in.fds[1] >= 0 || out.fds[0] >= 0 || err.fds[0] >= 0) {
    pollfd fds[3];
    nfds_t n = 0;
    int idx_in = -1, idx_out = -1, idx_err = -1;
    if (in.fds[1] >= 0) {
      idx_in = n;
      fds[n++] = {in.fds[1], POLLOUT, 0};
    }
    if (out.fds[0] >= 0) {
      idx_out = n;
      fds[n++] = {out.fds[0], POLLIN, 0};
    }
    if (err.fds[0] >= 0) {
      idx_err = n;
      fds[n++] = {err.fds[0], POLLIN, 0};
    }
    if (poll(fds, n, -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (idx_in >= 0 && (fds[idx_in].revents & (POLLOUT | POLLERR | POLLHUP))) {
      if (fds[idx_in].revents & (POLLERR | POLLHUP)) {
        in.close_write();  // child closed stdin early
      } else {
        ssize_t w = write(in.fds[1], pending.data(), pending.size());
        if (w > 0) pending.remove_prefix(static_cast<std::size_t>(w));
        else if (w < 0 && errno != EAGAIN && errno != EINTR) in.close_write();
        if (pending.empty()) in.close_write();
      }
    }
    auto drain = [&](int idx, Pipe& pipe, std::string& sink) {
      if (idx < 0 || !(fds[idx].revents & (POLLIN | POLLERR | POLLHUP))) return;
      ssize_t r = read(pipe.fds[0], buf, sizeof buf);
      if (r > 0) sink.append(buf, static_cast<std::size_t>(r));
      else if (r == 0 || (r < 0 && errno != EAGAIN && errno != EINTR))
        pipe.close_read();
    };
    drain(idx_out, out, result.out);
    drain(idx_err, err, result.err);
  }

  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {}
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  else if (WIFSIGNALED(status)) result.exit_code = 128 + WTERMSIG(status);
  return result;
}

}  // namespace schemev
