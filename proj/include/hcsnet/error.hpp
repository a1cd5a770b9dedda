#pragma once

#include <stdexcept>
#include <string>

namespace hcsnet {

// Base of every error the library throws. Callers that only need a
// diagnostic can catch this; the subclasses name the failing contract.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string key_path, const std::string& what)
      : Error(key_path.empty() ? what : key_path + ": " + what),
        key_path_(std::move(key_path)) {}

  const std::string& key_path() const noexcept { return key_path_; }

 private:
  std::string key_path_;
};

class LookupError : public Error {
  using Error::Error;
};

class DomainError : public Error {
  using Error::Error;
};

class ShapeError : public Error {
  using Error::Error;
};

class SequencingError : public Error {
  using Error::Error;
};

class IncompleteInputError : public Error {
  using Error::Error;
};

class SizeGuardError : public Error {
  using Error::Error;
};

class InsufficientDataError : public Error {
  using Error::Error;
};

class IoError : public Error {
  using Error::Error;
};

}  // namespace hcsnet
