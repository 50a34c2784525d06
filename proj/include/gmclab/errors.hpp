#pragma once

#include <stdexcept>
#include <string>

namespace gmclab {

// Every failure raised by the library derives from Error so callers can catch
// the whole family at once; the concrete type names the violated contract.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define GMCLAB_DEFINE_ERROR(Name) \
  class Name : public Error {     \
   public:                        \
    using Error::Error;           \
  }

GMCLAB_DEFINE_ERROR(ValidationError);
GMCLAB_DEFINE_ERROR(NotPositiveDefinite);
GMCLAB_DEFINE_ERROR(OutOfDomain);
GMCLAB_DEFINE_ERROR(InsufficientMass);
GMCLAB_DEFINE_ERROR(ScaleMismatch);
GMCLAB_DEFINE_ERROR(DegenerateTail);
GMCLAB_DEFINE_ERROR(TooFewSamples);
GMCLAB_DEFINE_ERROR(LengthMismatch);
GMCLAB_DEFINE_ERROR(DegenerateDesign);
GMCLAB_DEFINE_ERROR(ConfigError);
GMCLAB_DEFINE_ERROR(EmitError);
GMCLAB_DEFINE_ERROR(IoError);

#undef GMCLAB_DEFINE_ERROR

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace gmclab
