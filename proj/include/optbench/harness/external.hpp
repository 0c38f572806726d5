// Copyright 2026 The optbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// A child process used as an objective. Messages are single-line JSON
// objects on the child's stdin/stdout.
//
//   child  -> {"type":"hello","dimension":3,
//              "kinds":[{"kind":"continuous"},
//                       {"kind":"integer","low":0,"high":4},
//                       {"kind":"categorical","arity":3},
//                       {"kind":"unbounded_integer"}],
//              "minimum":0.0, "noisy":false}
//   parent -> {"type":"eval","id":1,"point":[0.5,1,2]}
//   child  -> {"type":"loss","id":1,"value":0.25}
//   parent -> {"type":"quit"}
//
// "kinds" defaults to all-continuous, "minimum" and "noisy" are optional.
// The command runs under /bin/sh -c. Scoring reuses the evaluation
// channel, so a noisy child is scored on noisy values.

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "optbench/core/optimizer.hpp"
#include "optbench/harness/records.hpp"

extern char** environ;

namespace optbench::harness {

struct ExternalOptions {
  std::chrono::milliseconds handshake_timeout{10000};
  std::chrono::milliseconds eval_timeout{60000};
};

class ExternalEvaluator final : public Evaluable {
 public:
  explicit ExternalEvaluator(std::string command, ExternalOptions options = {})
      : command_(std::move(command)), options_(options) {
    spawn();
    handshake();
  }

  ExternalEvaluator(const ExternalEvaluator&) = delete;
  ExternalEvaluator& operator=(const ExternalEvaluator&) = delete;

  ~ExternalEvaluator() override { shutdown(); }

  [[nodiscard]] const DomainSpec& domain() const override { return domain_; }
  [[nodiscard]] std::optional<double> known_minimum() const override { return minimum_; }
  [[nodiscard]] bool noisy() const override { return noisy_; }

  double evaluate(std::span<const double> x) override {
    if (x.size() != domain_.size()) throw ContractError("point has the wrong dimension");
    const std::uint64_t id = ++next_id_;
    std::string msg = "{\"type\":\"eval\",\"id\":" + std::to_string(id) + ",\"point\":[";
    for (std::size_t i = 0; i < x.size(); ++i) msg += (i ? "," : "") + format_real(x[i]);
    msg += "]}\n";
    send(msg);
    const auto reply = receive(options_.eval_timeout);
    try {
      if (reply.at("type").get<std::string>() != "loss") throw ProtocolError("expected a loss message");
      const auto got = reply.at("id").get<std::uint64_t>();
      if (got != id) {
        throw ProtocolError("reply id " + std::to_string(got) + " does not match request " + std::to_string(id));
      }
      return reply.at("value").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw ProtocolError(std::string("malformed loss message: ") + e.what());
    }
  }

  double noise_free(std::span<const double> x) override { return evaluate(x); }

 private:
  void spawn() {
    int to_child[2];
    int from_child[2];
    if (pipe(to_child) != 0) throw EvaluationError("pipe failed");
    if (pipe(from_child) != 0) {
      close(to_child[0]);
      close(to_child[1]);
      throw EvaluationError("pipe failed");
    }
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, to_child[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, from_child[1], STDOUT_FILENO);
    posix_spawn_file_actions_addclose(&actions, to_child[1]);
    posix_spawn_file_actions_addclose(&actions, from_child[0]);
    std::string sh = "/bin/sh";
    std::string flag = "-c";
    char* argv[] = {sh.data(), flag.data(), command_.data(), nullptr};
    const int rc = posix_spawn(&pid_, "/bin/sh", &actions, nullptr, argv, environ);
    posix_spawn_file_actions_destroy(&actions);
    close(to_child[0]);
    close(from_child[1]);
    if (rc != 0) {
      close(to_child[1]);
      close(from_child[0]);
      pid_ = -1;
      throw EvaluationError("cannot start evaluator: " + std::string(std::strerror(rc)));
    }
    write_fd_ = to_child[1];
    read_fd_ = from_child[0];
    fcntl(write_fd_, F_SETFD, FD_CLOEXEC);
    fcntl(read_fd_, F_SETFD, FD_CLOEXEC);
  }

  void handshake() {
    try {
      const auto hello = receive(options_.handshake_timeout);
      if (hello.at("type").get<std::string>() != "hello") throw ProtocolError("expected a hello message");
      const auto d = hello.at("dimension").get<std::size_t>();
      std::vector<VariableKind> kinds;
      if (hello.contains("kinds")) {
        for (const auto& k : hello["kinds"]) {
          const auto kind = k.at("kind").get<std::string>();
          if (kind == "continuous") {
            kinds.emplace_back(Continuous{});
          } else if (kind == "integer") {
            kinds.emplace_back(Integer{k.at("low").get<std::int64_t>(), k.at("high").get<std::int64_t>()});
          } else if (kind == "categorical") {
            kinds.emplace_back(Categorical{k.at("arity").get<int>()});
          } else if (kind == "unbounded_integer") {
            kinds.emplace_back(UnboundedInteger{});
          } else {
            throw ProtocolError("unknown variable kind " + kind);
          }
        }
        if (kinds.size() != d) throw ProtocolError("hello declares " + std::to_string(d) + " variables but lists " +
                                                   std::to_string(kinds.size()) + " kinds");
      } else {
        kinds.assign(d, Continuous{});
      }
      domain_ = DomainSpec(std::move(kinds));
      if (hello.contains("minimum")) minimum_ = hello["minimum"].get<double>();
      noisy_ = hello.value("noisy", false);
    } catch (const nlohmann::json::exception& e) {
      shutdown();
      throw ProtocolError(std::string("malformed hello message: ") + e.what());
    } catch (...) {
      shutdown();
      throw;
    }
  }

  void send(const std::string& msg) {
    std::size_t done = 0;
    while (done < msg.size()) {
      const ssize_t n = ::write(write_fd_, msg.data() + done, msg.size() - done);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) throw EvaluationError("evaluator closed its input");
      done += static_cast<std::size_t>(n);
    }
  }

  nlohmann::json receive(std::chrono::milliseconds timeout) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
      if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
        const std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (line.empty()) continue;
        try {
          return nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception&) {
          throw ProtocolError("evaluator sent a malformed line: " + line);
        }
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) throw EvaluationError("evaluator timed out");
      pollfd p{read_fd_, POLLIN, 0};
      const int rc = poll(&p, 1, static_cast<int>(left.count()));
      if (rc < 0 && errno == EINTR) continue;
      if (rc < 0) throw EvaluationError("poll failed");
      if (rc == 0) throw EvaluationError("evaluator timed out");
      char chunk[4096];
      const ssize_t n = ::read(read_fd_, chunk, sizeof(chunk));
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) throw EvaluationError("evaluator exited");
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  void shutdown() noexcept {
    if (write_fd_ >= 0) {
      static constexpr char kQuit[] = "{\"type\":\"quit\"}\n";
      // The child may already be gone; a failed write is fine here.
      const sighandler_t old = signal(SIGPIPE, SIG_IGN);
      [[maybe_unused]] const ssize_t n = ::write(write_fd_, kQuit, sizeof(kQuit) - 1);
      signal(SIGPIPE, old);
      close(write_fd_);
      write_fd_ = -1;
    }
    if (read_fd_ >= 0) {
      close(read_fd_);
      read_fd_ = -1;
    }
    if (pid_ > 0) {
      int status = 0;
      for (int i = 0; i < 100; ++i) {
        if (waitpid(pid_, &status, WNOHANG) != 0) {
          pid_ = -1;
          return;
        }
        usleep(10000);
      }
      kill(pid_, SIGKILL);
      waitpid(pid_, &status, 0);
      pid_ = -1;
    }
  }

  std::string command_;
  ExternalOptions options_;
  pid_t pid_ = -1;
  int write_fd_ = -1;
  int read_fd_ = -1;
  std::string buffer_;
  DomainSpec domain_;
  std::optional<double> minimum_;
  bool noisy_ = false;
  std::uint64_t next_id_ = 0;
};

}  // namespace optbench::harness
