#ifndef EPIBATCH_ERRORS_HPP
#define EPIBATCH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace epibatch {

// Bad input data or violated model invariants (CLI exit code 2).
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: unachievable tolerance, overflow, degenerate result
// (CLI exit code 3).
class NumericsError : public std::runtime_error {
public:
  explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace epibatch

#endif
