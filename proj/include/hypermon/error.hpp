#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypermon {

/// Base class of every error raised by the library.
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed formula or trace text. `offset` is a byte offset into the input.
class parse_error : public error {
public:
  parse_error(std::string message, std::size_t offset, std::vector<std::string> expected = {})
      : error(render(message, offset, expected)), offset_(offset), expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
  static std::string render(const std::string& message, std::size_t offset,
                            const std::vector<std::string>& expected) {
    std::string out = "offset " + std::to_string(offset) + ": " + message;
    if (!expected.empty()) {
      out += " (expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i) out += ", ";
        out += expected[i];
      }
      out += ")";
    }
    return out;
  }

  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// A formula that is not closed or binds a variable twice.
class formula_error : public error {
public:
  using error::error;
};

/// Kripke structure violating totality or referencing unknown states.
class invalid_structure : public error {
public:
  using error::error;
};

class first_letter_mismatch : public error {
public:
  using error::error;
};

class empty_input : public error {
public:
  using error::error;
};

/// Operation requires a tree or acyclic frame.
class unsupported_frame : public error {
public:
  using error::error;
};

/// Engine not applicable to the formula's quantifier pattern.
class unsupported_fragment : public error {
public:
  using error::error;
};

/// Quantification over an empty trace set without an explicit policy.
class empty_trace_set : public error {
public:
  using error::error;
};

/// Exhaustive procedure refused because the search space is too large.
class guard_exceeded : public error {
public:
  using error::error;
};

class invalid_argument : public error {
public:
  using error::error;
};

} // namespace hypermon
