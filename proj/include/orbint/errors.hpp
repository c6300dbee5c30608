#pragma once

#include <stdexcept>
#include <string>

namespace orbint {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ORBINT_ERROR(Name)                             \
  class Name : public Error {                          \
   public:                                             \
    explicit Name(const std::string& what)             \
        : Error(std::string(#Name ": ") + what) {}     \
  }

ORBINT_ERROR(InsufficientPrecision);
ORBINT_ERROR(MixedPrimes);
ORBINT_ERROR(BudgetExceeded);
ORBINT_ERROR(UnstableRefinement);
ORBINT_ERROR(NotAffine);
ORBINT_ERROR(FamilyMismatch);
ORBINT_ERROR(OddPrimeRequired);
ORBINT_ERROR(BelowThreshold);
ORBINT_ERROR(CellShrinkFailed);
ORBINT_ERROR(ParseError);
ORBINT_ERROR(Mismatch);
ORBINT_ERROR(NotInDomain);

#undef ORBINT_ERROR

}  // namespace orbint
