#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nrot {

// Bad user-supplied configuration (ranges, temperatures, vocab, counts).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Input data that violates a record or schema invariant.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Text that does not parse. `position` is a 1-based column for expressions,
// a byte offset for JSON documents, or a 1-based line number for JSONL.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what), position_(position) {}

  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

// World-state update that would drive a count negative.
class SimulationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Mixture sampling could not continue (exhausted finite source).
class StreamError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace nrot
