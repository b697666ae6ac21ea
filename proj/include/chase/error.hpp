#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace chase {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A quantifier (or enumeration) would visit more elements than the
// configured cap allows. Never a silent truncation.
struct ResourceError : Error {
  ResourceError(const std::string& what_sort, std::uint64_t count, std::uint64_t cap)
      : Error("resource cap exceeded: " + what_sort + " needs " + std::to_string(count) +
              " elements, cap is " + std::to_string(cap)),
        count(count),
        cap(cap) {}
  std::uint64_t count;
  std::uint64_t cap;
};

// Syntax or resolution error with a source location.
struct ParseError : Error {
  ParseError(int line, int col, const std::string& msg)
      : Error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line;
  int col;
};

}  // namespace chase
