#ifndef SWARMPATROL_ERRORS_HPP_
#define SWARMPATROL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace swarmpatrol {

// Error classes map 1:1 onto CLI exit statuses, so keep them distinct.

/// Scenario file could not be parsed (syntax, bad number, unknown directive).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& file, int line, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// A scenario or domain-type invariant is violated (counts, ranges, ordering).
class InvariantError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Footprint polygon is degenerate or self-intersecting.
class NonSimplePolygonError : public InvariantError {
  using InvariantError::InvariantError;
};

/// A routing query could not be satisfied (endpoint inside an inflated prism,
/// disconnected free space, non-finite weight).
class RouteError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Filesystem trouble while reading inputs or writing outputs.
class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace swarmpatrol

#endif  // SWARMPATROL_ERRORS_HPP_
