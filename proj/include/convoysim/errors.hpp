#pragma once

#include <stdexcept>
#include <string>

namespace convoysim {

class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input. `where` is a 1-based line number for files and
/// a 0-based field index for single-line records.
class ParseError : public SimError {
 public:
  ParseError(const std::string& msg, int where) : SimError(msg), where_(where) {}
  int where() const { return where_; }

 private:
  int where_;
};

class DuplicateParamError : public SimError {
 public:
  DuplicateParamError(const std::string& msg, int first_line, int second_line)
      : SimError(msg), first_(first_line), second_(second_line) {}
  int first_line() const { return first_; }
  int second_line() const { return second_; }

 private:
  int first_;
  int second_;
};

class NotFoundError : public SimError {
 public:
  using SimError::SimError;
};

class GeometryError : public SimError {
 public:
  using SimError::SimError;
};

class NumericError : public SimError {
 public:
  using SimError::SimError;
};

class ContractError : public SimError {
 public:
  using SimError::SimError;
};

}  // namespace convoysim
