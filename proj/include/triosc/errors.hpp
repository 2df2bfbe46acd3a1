#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace triosc {

// Every failure or degeneracy the library can signal. Some kinds are thrown
// (NumericalError), others travel as flags inside result structs; all of them
// must be serializable into reports, so they share one enumeration.
enum class ErrorKind {
    NonConvergence,
    DegenerateIsotropic,
    DegenerateCoupling,
    NotOrthogonal,
    NonPositiveMass,
    StepTooLarge,
    EigenbasisDiscontinuity,
    UsageError,
};

inline constexpr ErrorKind kAllErrorKinds[] = {
    ErrorKind::NonConvergence,      ErrorKind::DegenerateIsotropic,
    ErrorKind::DegenerateCoupling,  ErrorKind::NotOrthogonal,
    ErrorKind::NonPositiveMass,     ErrorKind::StepTooLarge,
    ErrorKind::EigenbasisDiscontinuity, ErrorKind::UsageError,
};

const char* to_string(ErrorKind kind);
std::optional<ErrorKind> error_kind_from_string(std::string_view name);

class NumericalError : public std::runtime_error {
  public:
    NumericalError(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

}  // namespace triosc
