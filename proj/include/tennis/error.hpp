#pragma once

#include <stdexcept>
#include <string>

namespace tennis {

/// Base of every error the library raises on purpose.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Caller passed something outside an operation's contract.
class ArgumentError : public Error {
public:
  using Error::Error;
};

/// Input data is malformed, incomplete or inconsistent.
class DataError : public Error {
public:
  using Error::Error;
};

class SchemaError : public DataError {
public:
  using DataError::DataError;
};

class ParseError : public DataError {
public:
  using DataError::DataError;
};

}  // namespace tennis
