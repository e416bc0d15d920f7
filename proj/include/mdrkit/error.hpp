#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mdrkit {

// Malformed user input: syntax, out-of-range indices, non-total tables.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : InputError(what + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

// A size guard refused to materialize or enumerate a structure.
class SizeGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A check that can only fail if a proven statement were false.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mdrkit
