#ifndef KONTACT_ERRORS_HPP
#define KONTACT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kontact {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define KONTACT_DEFINE_ERROR(Name)      \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  };

KONTACT_DEFINE_ERROR(DomainError)
KONTACT_DEFINE_ERROR(UnboundVariable)
KONTACT_DEFINE_ERROR(SampleDomainEmpty)
KONTACT_DEFINE_ERROR(ChartMismatch)
KONTACT_DEFINE_ERROR(KMismatch)
KONTACT_DEFINE_ERROR(ZeroDegree)
KONTACT_DEFINE_ERROR(SourceNotRk)
KONTACT_DEFINE_ERROR(SingularSystem)
KONTACT_DEFINE_ERROR(ZeroTestInconclusive)
KONTACT_DEFINE_ERROR(IncompatibleKFunction)
KONTACT_DEFINE_ERROR(NotHomogeneous)
KONTACT_DEFINE_ERROR(StructureDegenerateAtPoint)
KONTACT_DEFINE_ERROR(InconsistentSystem)
KONTACT_DEFINE_ERROR(LengthMismatch)
KONTACT_DEFINE_ERROR(NotIsotropic)
KONTACT_DEFINE_ERROR(DimensionNot4)
KONTACT_DEFINE_ERROR(InvalidArgument)

#undef KONTACT_DEFINE_ERROR

/// Malformed expression or definition file, with 1-based position.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error(message + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        detail_(message),
        line_(line),
        column_(column) {}

  const std::string& detail() const { return detail_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string detail_;
  int line_;
  int column_;
};

}  // namespace kontact

#endif  // KONTACT_ERRORS_HPP
