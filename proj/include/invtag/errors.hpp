#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace invtag {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated precondition on an argument (empty candidate list, bad config...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class UnknownLabel : public Error {
 public:
  explicit UnknownLabel(std::string label);
  const std::string& label() const { return label_; }

 private:
  std::string label_;
};

class DuplicateTarget : public Error {
 public:
  explicit DuplicateTarget(const std::string& label_word);
};

class EmptyAllowedSet : public Error {
 public:
  EmptyAllowedSet();
};

// Transport error, malformed response, non-finite score or timeout.
class ScorerFailure : public Error {
 public:
  using Error::Error;
};

class ConflictingGold : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  LengthMismatch(std::size_t expected, std::size_t actual);
};

// Malformed input file. `where` is a line number ("line 12") or a JSON path.
class ParseError : public Error {
 public:
  ParseError(std::string where, const std::string& what);
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

class MissingPrediction : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class SupportInfeasible : public Error {
 public:
  SupportInfeasible(std::string label, std::size_t available, std::size_t k);
  const std::string& label() const { return label_; }

 private:
  std::string label_;
};

class FixtureMismatch : public Error {
 public:
  FixtureMismatch(std::string name, const std::string& detail);
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

}  // namespace invtag
