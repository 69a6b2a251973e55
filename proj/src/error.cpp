#include "ee/error.hpp"

namespace ee {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::DanglingEvent: return "DanglingEvent";
        case Errc::ChoiceOutOfRange: return "ChoiceOutOfRange";
        case Errc::UnboundExplainer: return "UnboundExplainer";
        case Errc::UnknownTarget: return "UnknownTarget";
        case Errc::IdCollision: return "IdCollision";
        case Errc::SyntaxError: return "SyntaxError";
        case Errc::SchemaError: return "SchemaError";
        case Errc::RangeError: return "RangeError";
        case Errc::InvalidSpec: return "InvalidSpec";
        case Errc::UnknownContext: return "UnknownContext";
        case Errc::DuplicateId: return "DuplicateId";
        case Errc::UnknownExplainer: return "UnknownExplainer";
        case Errc::TargetSchemaMismatch: return "TargetSchemaMismatch";
        case Errc::UnknownSpec: return "UnknownSpec";
        case Errc::UnknownSession: return "UnknownSession";
        case Errc::SessionNotWaiting: return "SessionNotWaiting";
        case Errc::SessionClosed: return "SessionClosed";
        case Errc::NoEvaluations: return "NoEvaluations";
        case Errc::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace ee
