#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace vecirs {

/// Raised when a configuration or spec file violates an invariant.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Which constraint of the joint problem could not be met.
struct Infeasibility {
  std::string constraint;               // e.g. "energy_budget", "edge_cpu_total"
  std::optional<std::size_t> vehicle;   // set when a single vehicle is at fault
  double value = 0.0;                   // offending quantity
  double limit = 0.0;                   // bound it had to respect

  std::string describe() const;
};

class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(Infeasibility report)
      : std::runtime_error(report.describe()), report_(std::move(report)) {}

  const Infeasibility& report() const noexcept { return report_; }

 private:
  Infeasibility report_;
};

/// A numerical routine failed to bracket or converge.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double lo, double hi)
      : std::runtime_error(what + " (bracket [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "])"),
        lo_(lo),
        hi_(hi) {}

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

/// An internal invariant was breached (e.g. a non-monotone solver trace).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Instance exceeds what an exhaustive routine accepts.
class TooLargeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace vecirs
