#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ee {

enum class Errc {
    DanglingEvent,
    ChoiceOutOfRange,
    UnboundExplainer,
    UnknownTarget,
    IdCollision,
    SyntaxError,
    SchemaError,
    RangeError,
    InvalidSpec,
    UnknownContext,
    DuplicateId,
    UnknownExplainer,
    TargetSchemaMismatch,
    UnknownSpec,
    UnknownSession,
    SessionNotWaiting,
    SessionClosed,
    NoEvaluations,
    Io,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by this project carries one of the Errc codes so the
/// service layer can map it onto a wire `error{code, detail}` message.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& detail)
        : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code), detail_(detail) {}

    Errc code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    Errc code_;
    std::string detail_;
};

}  // namespace ee
