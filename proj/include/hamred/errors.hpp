#pragma once

#include <stdexcept>
#include <string>

namespace hamred {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define HAMRED_ERROR(Name)                          \
  class Name : public Error {                       \
   public:                                          \
    explicit Name(const std::string& what)          \
        : Error(std::string(#Name ": ") + what) {}  \
  }

HAMRED_ERROR(InvalidRank);
HAMRED_ERROR(ShapeError);
HAMRED_ERROR(InvalidElement);
HAMRED_ERROR(DegenerateBasis);
HAMRED_ERROR(RegularityViolation);
HAMRED_ERROR(SingularMatrix);
HAMRED_ERROR(NotPositiveDefinite);
HAMRED_ERROR(NotClassFunction);
HAMRED_ERROR(UnsupportedBracket);
HAMRED_ERROR(InvalidShape);
HAMRED_ERROR(UnsupportedWord);
HAMRED_ERROR(InvalidPlan);
HAMRED_ERROR(Unsupported);
HAMRED_ERROR(ConfigError);

#undef HAMRED_ERROR

// Carries the name of the violated clause so callers can report it verbatim.
class AssumptionViolation : public Error {
 public:
  AssumptionViolation(std::string clause, const std::string& detail)
      : Error("AssumptionViolation [" + clause + "]: " + detail),
        clause_(std::move(clause)) {}
  const std::string& clause() const { return clause_; }

 private:
  std::string clause_;
};

}  // namespace hamred
