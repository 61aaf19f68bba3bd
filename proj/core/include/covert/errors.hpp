#pragma once

#include <stdexcept>
#include <string>

namespace covert {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violates its documented range (negative power, epsilon > 1, ...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// The source-relay link cannot carry R_sd at any relay power, so the
/// source-to-destination transmission fails for this draw.
class InfeasibleRate : public Error {
 public:
  using Error::Error;
};

/// Power control with (mu + 1) * P_delta >= P_r^max: the covert threshold on
/// |h_rd|^2 is undefined.
class PowerBudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// The relay does not forward for this draw (|h_rd|^2 below mu*sigma_d^2/P_r^max).
class ForwardingOutage : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Too few Monte Carlo draws satisfied the forwarding condition.
class DegenerateSample : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace covert
