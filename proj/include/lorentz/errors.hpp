#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lorentz {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error("syntax error at offset " + std::to_string(position) + ": " + message),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownSymbol : public Error {
 public:
  explicit UnknownSymbol(std::string name)
      : Error("unknown symbol '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

#define LORENTZ_DEFINE_ERROR(Name)          \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  };

LORENTZ_DEFINE_ERROR(DomainError)
LORENTZ_DEFINE_ERROR(SlotError)
LORENTZ_DEFINE_ERROR(SingularMetric)
LORENTZ_DEFINE_ERROR(OrientationError)
LORENTZ_DEFINE_ERROR(StepFailure)
LORENTZ_DEFINE_ERROR(FrameNotOrthonormal)
LORENTZ_DEFINE_ERROR(InversionFailure)
LORENTZ_DEFINE_ERROR(NotCausal)
LORENTZ_DEFINE_ERROR(DegenerateEmbedding)
LORENTZ_DEFINE_ERROR(NotSpacelike)
LORENTZ_DEFINE_ERROR(WrongCodimension)
LORENTZ_DEFINE_ERROR(OrientationHintDegenerate)
LORENTZ_DEFINE_ERROR(NotApplicable)
LORENTZ_DEFINE_ERROR(RadiusError)
LORENTZ_DEFINE_ERROR(UnknownSpacetime)
LORENTZ_DEFINE_ERROR(ParamError)
LORENTZ_DEFINE_ERROR(FormatError)
LORENTZ_DEFINE_ERROR(DimensionError)

#undef LORENTZ_DEFINE_ERROR

}  // namespace lorentz
