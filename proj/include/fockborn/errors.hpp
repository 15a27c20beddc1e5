#pragma once

#include <stdexcept>
#include <string>

namespace fockborn {

/// Base of every exception thrown by the library. `kind()` is a stable,
/// machine-readable tag that ends up in report records.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define FOCKBORN_DEFINE_ERROR(Name)                          \
  class Name : public Error {                                \
   public:                                                   \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  }

FOCKBORN_DEFINE_ERROR(DimMismatch);
FOCKBORN_DEFINE_ERROR(NotUnitary);
FOCKBORN_DEFINE_ERROR(NotSelfAdjoint);
FOCKBORN_DEFINE_ERROR(DegenerateSpectrum);
FOCKBORN_DEFINE_ERROR(InvalidProjectorFamily);
FOCKBORN_DEFINE_ERROR(NotProjector);
FOCKBORN_DEFINE_ERROR(NotNormalized);
FOCKBORN_DEFINE_ERROR(ZeroWeight);
FOCKBORN_DEFINE_ERROR(InvalidArgument);
FOCKBORN_DEFINE_ERROR(ZeroDenominator);
FOCKBORN_DEFINE_ERROR(BadDistribution);
FOCKBORN_DEFINE_ERROR(WindowTooLarge);
FOCKBORN_DEFINE_ERROR(ParseError);
FOCKBORN_DEFINE_ERROR(ValidationError);

#undef FOCKBORN_DEFINE_ERROR

}  // namespace fockborn
