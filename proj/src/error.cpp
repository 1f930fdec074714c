#include "tdelay/error.hpp"

namespace tdelay {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::NonFiniteWindow: return "NonFiniteWindow";
        case ErrorCode::QuadratureFailure: return "QuadratureFailure";
        case ErrorCode::ZeroEnergy: return "ZeroEnergy";
        case ErrorCode::RatioOutOfRange: return "RatioOutOfRange";
        case ErrorCode::BinCountOverflow: return "BinCountOverflow";
        case ErrorCode::ResonanceOutsideWindow: return "ResonanceOutsideWindow";
        case ErrorCode::DuplicatePosition: return "DuplicatePosition";
        case ErrorCode::DepthBudgetExceeded: return "DepthBudgetExceeded";
        case ErrorCode::RefinementFailure: return "RefinementFailure";
        case ErrorCode::OutOfSpan: return "OutOfSpan";
        case ErrorCode::NonPositive: return "NonPositive";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::DuplicateName: return "DuplicateName";
        case ErrorCode::MissingRequiredColumn: return "MissingRequiredColumn";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
{
}

namespace {
std::string locate_message(std::size_t row, std::size_t column, const std::string& reason)
{
    std::string msg;
    if (row > 0) msg += "row " + std::to_string(row);
    if (column > 0) msg += (msg.empty() ? "" : ", ") + std::string("column ") + std::to_string(column);
    if (!msg.empty()) msg += ": ";
    return msg + reason;
}
}  // namespace

ParseError::ParseError(ErrorCode code, std::size_t row, std::size_t column, const std::string& reason)
    : Error(code, locate_message(row, column, reason)), row_(row), column_(column), reason_(reason)
{
}

}  // namespace tdelay
