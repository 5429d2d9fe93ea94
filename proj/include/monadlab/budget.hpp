#pragma once

#include <chrono>
#include <stdexcept>
#include <string>

namespace monadlab {

class BudgetExceeded : public std::runtime_error {
public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Wall-clock and step limits for long computations. Engines call
/// Budget::tick() in their inner loops; the active budget is per thread.
class Budget {
public:
  using Clock = std::chrono::steady_clock;

  Budget() = default;
  explicit Budget(double seconds, long long maxSteps = 0) {
    if (seconds > 0) {
      hasDeadline_ = true;
      deadline_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(seconds));
    }
    maxSteps_ = maxSteps;
  }
  /// A budget ending at a fixed instant, for several threads sharing one job deadline.
  static Budget until(Clock::time_point deadline, long long maxSteps = 0) {
    Budget b;
    b.hasDeadline_ = true;
    b.deadline_ = deadline;
    b.maxSteps_ = maxSteps;
    return b;
  }

  void step(long long n = 1) {
    steps_ += n;
    if (maxSteps_ > 0 && steps_ > maxSteps_)
      throw BudgetExceeded("step budget of " + std::to_string(maxSteps_) + " exhausted");
    if (hasDeadline_ && (steps_ >> 10) != ((steps_ - n) >> 10) && Clock::now() > deadline_)
      throw BudgetExceeded("time budget exhausted");
  }
  void checkTime() const {
    if (hasDeadline_ && Clock::now() > deadline_) throw BudgetExceeded("time budget exhausted");
  }
  long long steps() const { return steps_; }

  static Budget*& active() {
    thread_local Budget* b = nullptr;
    return b;
  }
  static void tick(long long n = 1) {
    if (Budget* b = active()) b->step(n);
  }
  static void check() {
    if (Budget* b = active()) b->checkTime();
  }

private:
  bool hasDeadline_ = false;
  Clock::time_point deadline_{};
  long long maxSteps_ = 0;
  long long steps_ = 0;
};

/// Installs a budget as the active one for the current thread.
class BudgetScope {
public:
  explicit BudgetScope(Budget& b) : prev_(Budget::active()) { Budget::active() = &b; }
  ~BudgetScope() { Budget::active() = prev_; }
  BudgetScope(const BudgetScope&) = delete;
  BudgetScope& operator=(const BudgetScope&) = delete;

private:
  Budget* prev_;
};

} // namespace monadlab
