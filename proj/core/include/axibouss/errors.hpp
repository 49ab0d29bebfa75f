#pragma once

#include <stdexcept>
#include <string>

namespace axibouss {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
  public:
    using Error::Error;
};

class InvalidParity : public Error {
  public:
    using Error::Error;
};

class InvalidInput : public Error {
  public:
    using Error::Error;
};

/// Tridiagonal factorization broke down. Should not happen on a valid grid.
class SolverFailure : public Error {
  public:
    using Error::Error;
};

/// A transport step violated its CFL bound; `admissible_dt` is the largest step that would pass.
class StepRejected : public Error {
  public:
    StepRejected(const std::string& what, double admissible_dt)
        : Error(what), admissible_dt_(admissible_dt) {}
    double admissible_dt() const noexcept { return admissible_dt_; }

  private:
    double admissible_dt_;
};

class UndefinedRatio : public Error {
  public:
    using Error::Error;
};

/// Bad configuration text or values; the message names the key or line.
class ConfigError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace axibouss
