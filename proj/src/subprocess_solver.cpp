#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <deque>

#include "ccbench/error.hpp"
#include "ccbench/harness.hpp"

namespace ccbench {

namespace {

using Clock = std::chrono::steady_clock;

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(Fd&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Fd& operator=(Fd&& o) noexcept {
    reset();
    fd_ = std::exchange(o.fd_, -1);
    return *this;
  }
  ~Fd() { reset(); }

  int get() const { return fd_; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

/// A child running `/bin/sh -c command` with piped stdin/stdout. Killed and
/// reaped on destruction if it has not exited.
class ChildProcess {
 public:
  explicit ChildProcess(const std::string& command) {
    int in_pipe[2];
    int out_pipe[2];
    if (::pipe2(in_pipe, O_CLOEXEC) != 0 || ::pipe2(out_pipe, O_CLOEXEC) != 0) {
      throw Error(std::string("pipe: ") + std::strerror(errno));
    }
    pid_ = ::fork();
    if (pid_ < 0) throw Error(std::string("fork: ") + std::strerror(errno));
    if (pid_ == 0) {
      ::setpgid(0, 0);
      ::dup2(in_pipe[0], STDIN_FILENO);
      ::dup2(out_pipe[1], STDOUT_FILENO);
      ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    stdin_ = Fd(in_pipe[1]);
    stdout_ = Fd(out_pipe[0]);
    ::fcntl(stdin_.get(), F_SETFL, ::fcntl(stdin_.get(), F_GETFL) | O_NONBLOCK);
  }

  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  ~ChildProcess() {
    stdin_.reset();
    stdout_.reset();
    if (pid_ > 0) {
      int status = 0;
      for (int i = 0; i < 50; ++i) {
        if (::waitpid(pid_, &status, WNOHANG) == pid_) return;
        ::usleep(10000);
      }
      // The shell may have forked the command; take down the whole group.
      ::kill(-pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
    }
  }

  int in_fd() const { return stdin_.get(); }
  int out_fd() const { return stdout_.get(); }
  void close_stdin() { stdin_.reset(); }

 private:
  pid_t pid_ = -1;
  Fd stdin_;
  Fd stdout_;
};

}  // namespace

SubprocessSolver::SubprocessSolver(std::string command, std::chrono::milliseconds timeout,
                                   std::size_t max_in_flight)
    : command_(std::move(command)), timeout_(timeout), max_in_flight_(std::max<std::size_t>(1, max_in_flight)) {}

std::vector<std::string> SubprocessSolver::solve(std::span<const SolverRequest> requests) {
  // Writes to a solver that died must surface as EPIPE, not kill the harness.
  ::signal(SIGPIPE, SIG_IGN);

  std::unordered_map<std::uint64_t, std::size_t> index_of;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    if (!index_of.emplace(requests[i].id, i).second) {
      throw ConfigError("duplicate request id " + std::to_string(requests[i].id));
    }
  }
  std::vector<std::string> paths(requests.size());
  if (requests.empty()) return paths;

  enum class State : std::uint8_t { pending, in_flight, answered, timed_out };
  std::vector<State> state(requests.size(), State::pending);

  ChildProcess child(command_);
  std::size_t next_to_send = 0;
  std::string send_buffer;
  std::size_t send_offset = 0;
  std::deque<std::size_t> in_flight;  // send order
  std::size_t outstanding = 0;
  std::size_t done = 0;
  Clock::time_point head_since = Clock::now();
  std::string read_buffer;

  auto advance_head = [&] {
    const bool had_head = !in_flight.empty();
    const std::size_t old_head = had_head ? in_flight.front() : 0;
    while (!in_flight.empty() && state[in_flight.front()] != State::in_flight) in_flight.pop_front();
    if (!in_flight.empty() && (!had_head || in_flight.front() != old_head)) head_since = Clock::now();
  };

  auto handle_line = [&](std::string_view line) {
    if (line.empty()) return;
    const auto response = decode_response(line);
    const auto it = index_of.find(response.id);
    if (it == index_of.end()) {
      throw ProtocolError("solver answered unknown request id " + std::to_string(response.id));
    }
    auto& s = state[it->second];
    if (s == State::timed_out) return;
    if (s != State::in_flight) {
      throw ProtocolError("solver answered request id " + std::to_string(response.id) +
                          (s == State::answered ? " twice" : " before it was sent"));
    }
    s = State::answered;
    paths[it->second] = response.path;
    --outstanding;
    ++done;
    advance_head();
  };

  while (done < requests.size()) {
    // Refill the send buffer while the in-flight window has room.
    while (send_offset == send_buffer.size() && next_to_send < requests.size() &&
           outstanding < max_in_flight_) {
      send_buffer = encode_request(requests[next_to_send]) + "\n";
      send_offset = 0;
      if (in_flight.empty()) head_since = Clock::now();
      state[next_to_send] = State::in_flight;
      in_flight.push_back(next_to_send);
      ++outstanding;
      ++next_to_send;
    }
    const bool want_write = send_offset < send_buffer.size() && child.in_fd() >= 0;
    if (next_to_send == requests.size() && !want_write && child.in_fd() >= 0) {
      child.close_stdin();
    }

    pollfd fds[2] = {{child.out_fd(), POLLIN, 0}, {child.in_fd(), POLLOUT, 0}};
    int wait_ms = -1;
    if (!in_flight.empty()) {
      const auto deadline = head_since + timeout_;
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
      wait_ms = static_cast<int>(std::max<std::int64_t>(0, left.count()));
    }
    const int rc = ::poll(fds, want_write ? 2 : 1, wait_ms);
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw Error(std::string("poll: ") + std::strerror(errno));
    }

    if (want_write && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
      const auto n = ::write(child.in_fd(), send_buffer.data() + send_offset,
                             send_buffer.size() - send_offset);
      if (n < 0 && errno != EAGAIN && errno != EINTR) {
        throw ProtocolError("solver closed its input with " + std::to_string(outstanding) +
                            " requests outstanding");
      }
      if (n > 0) send_offset += static_cast<std::size_t>(n);
    }

    if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
      char chunk[65536];
      const auto n = ::read(child.out_fd(), chunk, sizeof chunk);
      if (n < 0 && errno != EINTR && errno != EAGAIN) {
        throw Error(std::string("read: ") + std::strerror(errno));
      }
      if (n == 0) {
        if (done < requests.size()) {
          throw ProtocolError("solver exited with " + std::to_string(requests.size() - done) +
                              " requests unanswered");
        }
        break;
      }
      if (n > 0) {
        read_buffer.append(chunk, static_cast<std::size_t>(n));
        std::size_t start = 0;
        for (auto nl = read_buffer.find('\n'); nl != std::string::npos;
             nl = read_buffer.find('\n', start)) {
          handle_line(std::string_view(read_buffer).substr(start, nl - start));
          start = nl + 1;
        }
        read_buffer.erase(0, start);
      }
    }

    if (!in_flight.empty() && Clock::now() >= head_since + timeout_) {
      const std::size_t head = in_flight.front();
      state[head] = State::timed_out;
      paths[head].clear();
      --outstanding;
      ++done;
      ++timeouts_;
      advance_head();
    }
  }
  return paths;
}

}  // namespace ccbench
