#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace sturm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An enclosure still straddles a decision boundary at the precision cap.
class ResolutionExceeded : public Error {
  public:
    ResolutionExceeded(const std::string& what, long bits_reached)
        : Error(what + " (unresolved at " + std::to_string(bits_reached) + " bits)"),
          bits_reached_(bits_reached) {}

    long bits_reached() const noexcept { return bits_reached_; }

  private:
    long bits_reached_;
};

class DomainError : public Error {
  public:
    using Error::Error;
};

class DivisionByPossibleZero : public Error {
  public:
    using Error::Error;
};

/// Raised when a continued-fraction expansion of a rational input terminates.
/// Carries the finite expansion [0; a_1, ..., a_n].
class TerminatingExpansion : public DomainError {
  public:
    TerminatingExpansion(std::vector<mpz_class> quotients)
        : DomainError("continued fraction terminates after " +
                      std::to_string(quotients.size()) + " partial quotients (rational input)"),
          quotients_(std::move(quotients)) {}

    const std::vector<mpz_class>& quotients() const noexcept { return quotients_; }

  private:
    std::vector<mpz_class> quotients_;
};

class ParseError : public Error {
  public:
    using Error::Error;
};

}  // namespace sturm
