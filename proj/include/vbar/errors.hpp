#ifndef VBAR_ERRORS_HPP
#define VBAR_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace vbar {

/// Bad user input: malformed config, dimension mismatch, invalid parameters.
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An iterative solver failed to reach its tolerance. Carries the best
/// residuals seen so the caller can report them instead of guessing.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& msg, std::vector<double> residuals)
      : std::runtime_error(msg), best_residuals(std::move(residuals)) {}
  std::vector<double> best_residuals;
};

/// A self-check gate failed (e.g. the zero-mean residual of the angular
/// remainder exceeded tolerance). Distinct from InputError so the CLI can
/// report diagnostics rather than usage errors.
class DiagnosticError : public std::runtime_error {
public:
  explicit DiagnosticError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace vbar

#endif
