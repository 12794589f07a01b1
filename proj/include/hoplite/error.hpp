#pragma once

#include <stdexcept>
#include <string>

namespace hoplite {

struct SourceLocation {
  std::string fileName;
  int lineNumber = 1;
  int columnHint = 0;

  std::string str() const {
    std::string s = fileName.empty() ? "<input>" : fileName;
    s += ":" + std::to_string(lineNumber);
    if (columnHint > 0) s += ":" + std::to_string(columnHint);
    return s;
  }
};

// Base for everything the library throws on bad input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(SourceLocation where, const std::string& what)
      : Error(where.str() + ": " + what), where_(std::move(where)), message_(what) {}

  const SourceLocation& where() const noexcept { return where_; }
  const std::string& message() const noexcept { return message_; }

 private:
  SourceLocation where_;
  std::string message_;
};

// Input that parses but breaks a domain rule. `field` names the offending
// item (e.g. "subMix[3]") so the service can report field-level messages.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

}  // namespace hoplite
