#pragma once

#include <stdexcept>
#include <string>

namespace dwimpute {

// Base of every error raised by the library. The CLI maps IoError and
// UsageError to exit status 2 and everything else to 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed CSV or schema input (ragged rows, duplicate columns, unknown JSON fields).
class FormatError : public IoError {
 public:
  using IoError::IoError;
};

class UnknownAttributeError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class StaleLinkError : public Error {
 public:
  using Error::Error;
};

// An imputer produced a fill the evaluation protocol did not expect.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace dwimpute
