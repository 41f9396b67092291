#include "dcfault/error.hpp"

namespace dcfault {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidParameter: return "InvalidParameter";
        case ErrorKind::UnstableIntegration: return "UnstableIntegration";
        case ErrorKind::InsufficientPeaks: return "InsufficientPeaks";
        case ErrorKind::DegenerateFit: return "DegenerateFit";
        case ErrorKind::NoOscillation: return "NoOscillation";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::CalibrationUnstable: return "CalibrationUnstable";
        case ErrorKind::MalformedInput: return "MalformedInput";
    }
    return "Unknown";
}

namespace {

std::string compose(ErrorKind kind, const std::string& detail, const std::string& stage) {
    std::string msg(to_string(kind));
    if (!stage.empty()) {
        msg += " at stage ";
        msg += stage;
    }
    if (!detail.empty()) {
        msg += ": ";
        msg += detail;
    }
    return msg;
}

}  // namespace

Error::Error(ErrorKind kind, std::string detail, std::string stage)
    : std::runtime_error(compose(kind, detail, stage)),
      kind_(kind),
      detail_(std::move(detail)),
      stage_(std::move(stage)) {}

Error Error::with_stage(std::string stage) const {
    if (!stage_.empty()) {
        return *this;
    }
    return Error(kind_, detail_, std::move(stage));
}

void throw_invalid(std::string_view field, std::string_view bound) {
    std::string detail(field);
    detail += " must satisfy ";
    detail += bound;
    throw Error(ErrorKind::InvalidParameter, std::move(detail));
}

}  // namespace dcfault
