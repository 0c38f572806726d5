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

// Coroutine plumbing that lets sequential search procedures (line searches,
// trust-region loops) be written as ordinary code and driven by ask/tell.
//
// A procedure is a Task<T>. It evaluates a point with
//     double f = co_await channel.evaluate(x);
// which suspends the whole chain of nested tasks. The driver reads
// channel.probe(), obtains the loss, and calls channel.resume(loss).

#include <coroutine>
#include <exception>
#include <optional>
#include <utility>

#include <Eigen/Dense>

namespace optbench::coro {

class Channel {
 public:
  struct EvaluateAwaiter {
    Channel* channel;
    Eigen::VectorXd point;

    bool await_ready() const noexcept { return false; }
    void await_suspend(std::coroutine_handle<> h) noexcept {
      channel->probe_ = std::move(point);
      channel->waiting_ = h;
    }
    double await_resume() const noexcept { return channel->value_; }
  };

  EvaluateAwaiter evaluate(Eigen::VectorXd x) { return EvaluateAwaiter{this, std::move(x)}; }

  [[nodiscard]] bool has_probe() const noexcept { return static_cast<bool>(waiting_); }
  [[nodiscard]] const Eigen::VectorXd& probe() const noexcept { return probe_; }

  void resume(double value) {
    value_ = value;
    auto h = std::exchange(waiting_, {});
    h.resume();
  }

 private:
  Eigen::VectorXd probe_;
  double value_ = 0.0;
  std::coroutine_handle<> waiting_;
};

template <class T>
class Task {
 public:
  struct promise_type {
    std::optional<T> value;
    std::exception_ptr error;
    std::coroutine_handle<> continuation;

    Task get_return_object() {
      return Task(std::coroutine_handle<promise_type>::from_promise(*this));
    }
    std::suspend_always initial_suspend() noexcept { return {}; }

    struct FinalAwaiter {
      bool await_ready() const noexcept { return false; }
      std::coroutine_handle<> await_suspend(std::coroutine_handle<promise_type> h) noexcept {
        if (auto c = h.promise().continuation) return c;
        return std::noop_coroutine();
      }
      void await_resume() const noexcept {}
    };
    FinalAwaiter final_suspend() noexcept { return {}; }

    void return_value(T v) { value = std::move(v); }
    void unhandled_exception() { error = std::current_exception(); }
  };

  Task() = default;
  explicit Task(std::coroutine_handle<promise_type> h) : handle_(h) {}
  Task(Task&& other) noexcept : handle_(std::exchange(other.handle_, {})) {}
  Task& operator=(Task&& other) noexcept {
    if (this != &other) {
      destroy();
      handle_ = std::exchange(other.handle_, {});
    }
    return *this;
  }
  Task(const Task&) = delete;
  Task& operator=(const Task&) = delete;
  ~Task() { destroy(); }

  // Awaiting a task runs it as a nested call.
  bool await_ready() const noexcept { return false; }
  std::coroutine_handle<> await_suspend(std::coroutine_handle<> parent) noexcept {
    handle_.promise().continuation = parent;
    return handle_;
  }
  T await_resume() {
    if (handle_.promise().error) std::rethrow_exception(handle_.promise().error);
    return std::move(*handle_.promise().value);
  }

  /// Starts a top-level task; it runs until its first evaluation request.
  void start() { handle_.resume(); }
  [[nodiscard]] bool valid() const noexcept { return static_cast<bool>(handle_); }
  [[nodiscard]] bool done() const noexcept { return !handle_ || handle_.done(); }
  void rethrow_if_failed() const {
    if (handle_ && handle_.done() && handle_.promise().error) {
      std::rethrow_exception(handle_.promise().error);
    }
  }

 private:
  void destroy() {
    if (handle_) handle_.destroy();
    handle_ = {};
  }

  std::coroutine_handle<promise_type> handle_;
};

struct Unit {};

}  // namespace optbench::coro
