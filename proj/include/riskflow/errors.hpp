#ifndef RISKFLOW_ERRORS_HPP
#define RISKFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace riskflow {

// Exit codes used by the CLI; library code throws, main() maps.
enum ExitCode : int {
  exit_ok = 0,
  exit_failure = 1,
  exit_config_error = 2,
  exit_numeric_error = 3,
  exit_io_error = 4,
};

// Invalid scenario input: bad domain, bad config file, violated type invariants.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
  explicit ConfigError(const std::vector<std::string>& issues)
      : std::runtime_error(join(issues)), issues_(issues) {}

  const std::vector<std::string>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out = "configuration invalid:";
    for (const auto& s : issues) {
      out += "\n  - ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> issues_;
};

// Numeric failure at run time: degenerate denominator, stability bound
// violation, non-oscillatory parameters, coordinate outside the domain.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Denominator within 1e-9 of zero in the pricing algebra. Ensemble runs
// hitting this are excluded and counted, never silently patched.
class DegeneracyError : public NumericError {
 public:
  using NumericError::NumericError;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace riskflow

#endif
