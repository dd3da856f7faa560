#pragma once

#include <stdexcept>
#include <string>

namespace grs {

// Base class for everything this library throws on purpose. Callers that want
// a single catch point use grs::error; the subclasses distinguish bad inputs
// from genuine math domain problems.
struct error : std::runtime_error {
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Math domain violation: division by (near) zero, ln/sqrt of a non-positive
// value, fractional power of a non-positive base, spline evaluated outside its
// knot range.
struct domain_error : error {
  explicit domain_error(const std::string& msg) : error(msg) {}
};

// Structural misuse: jet order/variable-count mismatch, tensor index out of
// range, malformed builder parameters.
struct shape_error : error {
  explicit shape_error(const std::string& msg) : error(msg) {}
};

// A metric (or frame step) degenerated at the evaluation point.
struct degenerate_error : error {
  explicit degenerate_error(const std::string& msg) : error(msg) {}
};

// Expression parse failure; offset is the byte position in the input string.
struct parse_error : error {
  parse_error(const std::string& msg, std::size_t off)
      : error(msg + " (at offset " + std::to_string(off) + ")"), offset(off) {}
  std::size_t offset;
};

}  // namespace grs
