#ifndef URARQ_ERRORS_HPP
#define URARQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace urarq {

// Bad user-supplied arguments (CLI or API misuse). Maps to exit code 2.
class UsageError : public std::runtime_error {
  public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// A requested operating point cannot be met by the model in force,
// e.g. a per-round outage of one or more. Maps to exit code 3.
class InfeasibleError : public std::runtime_error {
  public:
    InfeasibleError(const std::string& what, int round)
        : std::runtime_error(what), round_(round) {}
    // 1-based ARQ round that violated feasibility, 0 if not round-specific.
    int round() const noexcept { return round_; }

  private:
    int round_;
};

// A numerical routine failed to meet its requested tolerance.
// Maps to exit code 4.
class NumericalError : public std::runtime_error {
  public:
    NumericalError(const std::string& what, double achieved_tolerance)
        : std::runtime_error(what), achieved_(achieved_tolerance) {}
    double achieved_tolerance() const noexcept { return achieved_; }

  private:
    double achieved_;
};

} // namespace urarq

#endif
