#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dcfault {

enum class ErrorKind {
    InvalidParameter,
    UnstableIntegration,
    InsufficientPeaks,
    DegenerateFit,
    NoOscillation,
    OutOfRange,
    CalibrationUnstable,
    MalformedInput,
};

[[nodiscard]] std::string_view to_string(ErrorKind kind) noexcept;

/// Library-wide exception. `stage()` names the pipeline stage that raised it
/// and is empty until a caller attributes it (see `with_stage`).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string detail, std::string stage = {});

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::string& stage() const noexcept { return stage_; }
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

    /// Copy of this error attributed to `stage`; an existing attribution wins.
    [[nodiscard]] Error with_stage(std::string stage) const;

private:
    ErrorKind kind_;
    std::string detail_;
    std::string stage_;
};

[[noreturn]] void throw_invalid(std::string_view field, std::string_view bound);

}  // namespace dcfault
