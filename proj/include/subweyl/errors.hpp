#pragma once

#include <stdexcept>
#include <string>

namespace subweyl {

// Every failure the library reports derives from Error so callers (the CLI in
// particular) can map families of failures onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// log/sqrt/pow/division outside the mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A directed enclosure is too wide to decide a sign, a division or an integer
// rounding. Retrying at a higher precision may succeed.
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

// A parameter set fails one of the admissibility predicates. `predicate()`
// names the first violated one, e.g. "h1 > 1".
class AdmissibilityError : public Error {
 public:
  AdmissibilityError(std::string predicate, const std::string& detail)
      : Error("inadmissible parameters: " + predicate +
              (detail.empty() ? "" : " (" + detail + ")")),
        predicate_(std::move(predicate)) {}
  const std::string& predicate() const { return predicate_; }

 private:
  std::string predicate_;
};

class NoAdmissiblePoint : public Error {
 public:
  using Error::Error;
};

class NoCrossover : public Error {
 public:
  using Error::Error;
};

class SizeExceeded : public Error {
 public:
  using Error::Error;
};

class EnvelopeMissing : public Error {
 public:
  using Error::Error;
};

class MonotonicityViolation : public Error {
 public:
  using Error::Error;
};

class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace subweyl
