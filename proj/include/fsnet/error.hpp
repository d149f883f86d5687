#ifndef FSNET_ERROR_HPP
#define FSNET_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fsnet
{

// Malformed text input (CSV, FSN, AFS). Carries the 1-based line number when known.
class parse_error : public std::runtime_error
{
public:
  parse_error(const std::string& what, std::size_t line = 0)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what)
    , line_(line)
  {
  }

  auto line() const noexcept -> std::size_t { return line_; }

private:
  std::size_t line_;
};

// Input data violating a structural requirement (zero-degree sample, missing labels, ...).
class data_error : public std::runtime_error
{
  using std::runtime_error::runtime_error;
};

// Invalid run configuration, rejected before any work is done.
class config_error : public std::invalid_argument
{
  using std::invalid_argument::invalid_argument;
};

// Argument outside a function's mathematical domain.
class domain_error : public std::domain_error
{
  using std::domain_error::domain_error;
};

// Exhaustive computation refused because it would exceed the configured budget.
class budget_error : public std::runtime_error
{
  using std::runtime_error::runtime_error;
};

} // namespace fsnet

#endif // FSNET_ERROR_HPP
