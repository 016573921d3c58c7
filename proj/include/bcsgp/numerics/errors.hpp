#pragma once
#include <stdexcept>
#include <string>
#include <vector>

namespace bcsgp {

/// Invalid input configuration (bad grid size, h outside (0,1), unknown key...).
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to reach its stated tolerance.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string &what, double achieved)
      : std::runtime_error(what), m_achieved(achieved) {}
  double achieved() const { return m_achieved; }

private:
  double m_achieved;
};

/// Input outside the domain of a functional (e.g. an undecayed tail).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Non-fatal messages collected along a computation. Passed by pointer; a null
/// pointer discards the messages.
struct Diagnostics {
  std::vector<std::string> warnings;
  void warn(std::string msg) { warnings.push_back(std::move(msg)); }
};

inline void warn(Diagnostics *diag, std::string msg) {
  if (diag)
    diag->warn(std::move(msg));
}

} // namespace bcsgp
