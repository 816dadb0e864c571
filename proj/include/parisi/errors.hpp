#pragma once

#include <stdexcept>
#include <string>

namespace parisi {

// Base for all library errors. Messages are prefixed with the module they
// originate from so CLI users can tell config problems from numerical ones.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidMixture : Error {
  using Error::Error;
};

struct InvalidOrderParameter : Error {
  InvalidOrderParameter(const std::string& msg, int index)
      : Error(msg), index_(index) {}
  int index() const { return index_; }

 private:
  int index_;
};

struct InvalidTemperature : Error {
  using Error::Error;
};

struct GridTooNarrow : Error {
  using Error::Error;
};

struct InvalidIntegrand : Error {
  using Error::Error;
};

struct UnsupportedOrder : Error {
  using Error::Error;
};

struct InvalidParameter : Error {
  using Error::Error;
};

struct ResourceLimit : Error {
  using Error::Error;
};

struct NotAParisiMeasure : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace parisi
