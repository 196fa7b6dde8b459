#pragma once

#include <stdexcept>
#include <string>

namespace phylokit {

// Raised for malformed input, violated preconditions and numerically
// undefined requests (empty observations, saturated distances, ...).
// The CLI maps it to exit code 2.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Parse failures carry the byte offset into the offending text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace phylokit
