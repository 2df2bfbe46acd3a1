#include "triosc/errors.hpp"

namespace triosc {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NonConvergence: return "NonConvergence";
        case ErrorKind::DegenerateIsotropic: return "DegenerateIsotropic";
        case ErrorKind::DegenerateCoupling: return "DegenerateCoupling";
        case ErrorKind::NotOrthogonal: return "NotOrthogonal";
        case ErrorKind::NonPositiveMass: return "NonPositiveMass";
        case ErrorKind::StepTooLarge: return "StepTooLarge";
        case ErrorKind::EigenbasisDiscontinuity: return "EigenbasisDiscontinuity";
        case ErrorKind::UsageError: return "UsageError";
    }
    return "Unknown";
}

std::optional<ErrorKind> error_kind_from_string(std::string_view name) {
    for (ErrorKind kind : kAllErrorKinds) {
        if (name == to_string(kind)) return kind;
    }
    return std::nullopt;
}

}  // namespace triosc
